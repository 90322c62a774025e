#include "mvt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mvt/error.hpp"
#include "mvt/special.hpp"

namespace mvt {

namespace {

Vector checked_mu(Vector mu) {
  if (mu.empty()) throw Error(Errc::InvalidParams, "mu: must have at least one entry");
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!std::isfinite(mu[i])) throw Error(Errc::InvalidParams, "mu[" + std::to_string(i) + "] is not finite");
  }
  return mu;
}

Matrix checked_sigma(Matrix sigma, std::size_t p) {
  if (sigma.size() != p) {
    throw Error(Errc::DimensionMismatch,
                "sigma is " + std::to_string(sigma.size()) + "x" + std::to_string(sigma.size()) +
                    ", mu has length " + std::to_string(p));
  }
  return sigma;
}

double checked_nu(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(Errc::InvalidParams, "nu must be positive and finite, got " + std::to_string(nu));
  }
  return nu;
}

}  // namespace

MVTParams::MVTParams(Vector mu, Matrix sigma, double nu)
    : mu_(checked_mu(std::move(mu))),
      sigma_(checked_sigma(std::move(sigma), mu_.size())),
      nu_(checked_nu(nu)),
      factor_(linalg::cholesky(sigma_)) {}

ScaledChiSquare::ScaledChiSquare(double b, double c) : b_(b), c_(c) {
  if (!(b > 0.0) || !std::isfinite(b) || !(c > 0.0) || !std::isfinite(c)) {
    throw Error(Errc::InvalidParams,
                "scaled chi-square needs b, c > 0, got b=" + std::to_string(b) + " c=" + std::to_string(c));
  }
}

double log_pdf(const MVTParams& p, std::span<const double> x) {
  const double d = linalg::mahalanobis_sq(x, p.mu(), p.factor());
  const double nu = p.nu();
  const double dim = static_cast<double>(p.dim());
  return special::log_gamma_ratio(0.5 * nu, 0.5 * dim) -
         0.5 * dim * std::log(nu * std::numbers::pi) - 0.5 * p.factor().log_det() -
         0.5 * (nu + dim) * std::log1p(d / nu);
}

double pdf(const MVTParams& p, std::span<const double> x) { return std::exp(log_pdf(p, x)); }

double scaled_chisq_log_pdf(const ScaledChiSquare& s, double w) {
  if (!(w > 0.0)) throw Error(Errc::NonPositiveSupport, "w = " + std::to_string(w));
  const double k = s.shape();
  return k * std::log(s.rate()) - special::log_gamma(k) + (k - 1.0) * std::log(w) - s.rate() * w;
}

double scaled_chisq_cdf(const ScaledChiSquare& s, double w) {
  if (!(w > 0.0)) return 0.0;
  return special::gamma_p(s.shape(), s.rate() * w);
}

double sample_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^{1/a}
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_scaled_chisq(const ScaledChiSquare& s, RngStream& rng) {
  return sample_gamma(s.shape(), rng) / s.rate();
}

Vector sample_one(const MVTParams& p, RngStream& rng) {
  const double q = sample_scaled_chisq(ScaledChiSquare(p.nu(), p.nu()), rng);
  const double inv_sqrt_q = 1.0 / std::sqrt(q);
  Vector y(p.dim());
  for (double& v : y) v = rng.normal() * inv_sqrt_q;
  Vector x = linalg::lower_multiply(p.factor(), y);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += p.mu()[i];
  return x;
}

std::vector<Vector> sample(const MVTParams& p, std::size_t n, RngStream& rng) {
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(p, rng));
  return out;
}

}  // namespace mvt
