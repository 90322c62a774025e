#ifndef MVT_DISTRIBUTION_HPP
#define MVT_DISTRIBUTION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mvt/linalg.hpp"
#include "mvt/rng.hpp"

namespace mvt {

using linalg::Matrix;
using linalg::SPDFactor;
using linalg::Vector;

/// Multivariate t law t_p(mu, Sigma, nu). The Cholesky factor of Sigma is
/// computed once at construction.
class MVTParams {
 public:
  /// Throws DimensionMismatch, InvalidParams (non-finite mu, nu <= 0 or
  /// non-finite), NotSymmetric or NotPositiveDefinite.
  MVTParams(Vector mu, Matrix sigma, double nu);

  std::size_t dim() const noexcept { return mu_.size(); }
  const Vector& mu() const noexcept { return mu_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  double nu() const noexcept { return nu_; }
  const SPDFactor& factor() const noexcept { return factor_; }

 private:
  Vector mu_;
  Matrix sigma_;
  double nu_;
  SPDFactor factor_;
};

/// Law of W ~ chi^2_b / c: density proportional to w^{b/2-1} exp(-c w / 2),
/// i.e. gamma with shape b/2 and rate c/2.
class ScaledChiSquare {
 public:
  /// Throws InvalidParams unless b, c are positive and finite.
  ScaledChiSquare(double b, double c);

  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double shape() const noexcept { return 0.5 * b_; }
  double rate() const noexcept { return 0.5 * c_; }
  double mean() const noexcept { return b_ / c_; }
  double variance() const noexcept { return 2.0 * b_ / (c_ * c_); }

  friend bool operator==(const ScaledChiSquare&, const ScaledChiSquare&) = default;

 private:
  double b_;
  double c_;
};

double log_pdf(const MVTParams& p, std::span<const double> x);
/// exp(log_pdf); 0 on underflow.
double pdf(const MVTParams& p, std::span<const double> x);

/// Log of the normalized density. Throws NonPositiveSupport for w <= 0.
double scaled_chisq_log_pdf(const ScaledChiSquare& s, double w);
/// P(W <= w); 0 for w <= 0.
double scaled_chisq_cdf(const ScaledChiSquare& s, double w);

/// Unit-rate gamma variate, any real shape > 0 (Marsaglia-Tsang squeeze,
/// with the U^{1/shape} boost below shape 1).
double sample_gamma(double shape, RngStream& rng);
double sample_scaled_chisq(const ScaledChiSquare& s, RngStream& rng);

/// One draw mu + L z / sqrt(q), q ~ chi^2_nu/nu. Consumes q first, then the
/// p normals of z, from rng.
Vector sample_one(const MVTParams& p, RngStream& rng);
std::vector<Vector> sample(const MVTParams& p, std::size_t n, RngStream& rng);

}  // namespace mvt

#endif  // MVT_DISTRIBUTION_HPP
