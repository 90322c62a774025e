#ifndef MVT_LINALG_HPP
#define MVT_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "mvt/partition.hpp"

namespace mvt::linalg {

using Vector = std::vector<double>;

/// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Throws Error{DimensionMismatch} on ragged or non-square input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  std::vector<std::vector<double>> to_rows() const;
  bool all_finite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

Matrix operator*(double s, const Matrix& m);

/// Rows and columns of m picked by idx, in that order.
Matrix submatrix(const Matrix& m, std::span<const std::size_t> idx);
Vector gather(std::span<const double> v, std::span<const std::size_t> idx);

/// Cholesky factor L (lower triangular, positive diagonal) of an SPD matrix,
/// with log|A| = 2 sum log L_ii cached.
class SPDFactor {
 public:
  const Matrix& lower() const noexcept { return lower_; }
  double log_det() const noexcept { return log_det_; }
  std::size_t dim() const noexcept { return lower_.size(); }

 private:
  friend SPDFactor cholesky(const Matrix& m);
  SPDFactor(Matrix lower, double log_det) : lower_(std::move(lower)), log_det_(log_det) {}

  Matrix lower_;
  double log_det_ = 0.0;
};

/// Relative asymmetry below this is absorbed by symmetrizing.
inline constexpr double kSymmetryTolerance = 1e-8;

/// Unpivoted Cholesky of (m + m^T)/2.
/// Throws NotSymmetric, NotPositiveDefinite (pivot <= 0 or non-finite).
SPDFactor cholesky(const Matrix& m);

/// Solves L y = b.
Vector forward_solve(const SPDFactor& f, std::span<const double> b);
/// Solves L^T y = b.
Vector backward_solve(const SPDFactor& f, std::span<const double> b);
/// Solves (L L^T) y = b.
Vector solve_spd(const SPDFactor& f, std::span<const double> b);
/// Returns L z.
Vector lower_multiply(const SPDFactor& f, std::span<const double> z);

/// Sigma22 - Sigma21 Sigma11^{-1} Sigma12 for the blocks named by part.
Matrix schur_complement(const Matrix& sigma, const Partition& part);

/// (x - mu)^T A^{-1} (x - mu) where f factors A.
double mahalanobis_sq(std::span<const double> x, std::span<const double> mu, const SPDFactor& f);

}  // namespace mvt::linalg

#endif  // MVT_LINALG_HPP
