#include "mvt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvt/error.hpp"

namespace mvt::linalg {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " has length " + std::to_string(got) +
                                             ", expected " + std::to_string(want));
  }
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
  data_.reserve(n_ * n_);
  for (const auto& r : rows) {
    require_dim(r.size(), n_, "matrix row");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_dim(rows[i].size(), rows.size(), ("matrix row " + std::to_string(i)).c_str());
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.n_));
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> rows(n_);
  for (std::size_t i = 0; i < n_; ++i) rows[i].assign(row(i).begin(), row(i).end());
  return rows;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(double s, const Matrix& m) {
  Matrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = s * m(i, j);
  return out;
}

Matrix submatrix(const Matrix& m, std::span<const std::size_t> idx) {
  Matrix out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

Vector gather(std::span<const double> v, std::span<const std::size_t> idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

SPDFactor cholesky(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(Errc::DimensionMismatch, "empty matrix");
  if (!m.all_finite()) throw Error(Errc::NotPositiveDefinite, "non-finite entry");

  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = m(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      const double upper = m(j, i);
      const double lower = m(i, j);
      // Scale by the entry itself or the geometric mean of its diagonal pivots,
      // so a near-zero off-diagonal does not make rounding noise look asymmetric.
      const double scale = std::max({std::abs(upper), std::abs(lower),
                                     std::sqrt(std::abs(m(i, i) * m(j, j)))});
      if (std::abs(upper - lower) > kSymmetryTolerance * scale) {
        throw Error(Errc::NotSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") and (" + std::to_string(j) + "," + std::to_string(i) +
                                            ") differ");
      }
      a(i, j) = 0.5 * (upper + lower);
    }
  }

  Matrix l(n);
  double log_det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw Error(Errc::NotPositiveDefinite, "pivot " + std::to_string(j) + " is " + std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    log_det += 2.0 * std::log(ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return SPDFactor(std::move(l), log_det);
}

Vector forward_solve(const SPDFactor& f, std::span<const double> b) {
  const Matrix& l = f.lower();
  const std::size_t n = l.size();
  require_dim(b.size(), n, "right-hand side");
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

Vector backward_solve(const SPDFactor& f, std::span<const double> b) {
  const Matrix& l = f.lower();
  const std::size_t n = l.size();
  require_dim(b.size(), n, "right-hand side");
  Vector y(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * y[k];
    y[i] = s / l(i, i);
  }
  return y;
}

Vector solve_spd(const SPDFactor& f, std::span<const double> b) {
  return backward_solve(f, forward_solve(f, b));
}

Vector lower_multiply(const SPDFactor& f, std::span<const double> z) {
  const Matrix& l = f.lower();
  const std::size_t n = l.size();
  require_dim(z.size(), n, "vector");
  Vector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += l(i, k) * z[k];
    out[i] = s;
  }
  return out;
}

Matrix schur_complement(const Matrix& sigma, const Partition& part) {
  require_dim(part.dim(), sigma.size(), "partition");
  Matrix s22 = submatrix(sigma, part.block2());
  if (part.p1() == 0) return s22;

  const SPDFactor f11 = cholesky(submatrix(sigma, part.block1()));
  // Columns of L11^{-1} Sigma12; the correction is their Gram matrix.
  std::vector<Vector> w(part.p2());
  Vector col(part.p1());
  for (std::size_t j = 0; j < part.p2(); ++j) {
    for (std::size_t i = 0; i < part.p1(); ++i) col[i] = sigma(part.block1()[i], part.block2()[j]);
    w[j] = forward_solve(f11, col);
  }
  for (std::size_t i = 0; i < part.p2(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < part.p1(); ++k) dot += w[i][k] * w[j][k];
      s22(i, j) -= dot;
      s22(j, i) = s22(i, j);
    }
  }
  return s22;
}

double mahalanobis_sq(std::span<const double> x, std::span<const double> mu, const SPDFactor& f) {
  require_dim(x.size(), f.dim(), "point");
  require_dim(mu.size(), f.dim(), "location");
  Vector diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - mu[i];
  const Vector y = forward_solve(f, diff);
  double d = 0.0;
  for (double v : y) d += v * v;
  return d;
}

}  // namespace mvt::linalg
