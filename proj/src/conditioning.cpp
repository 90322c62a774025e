#include "mvt/conditioning.hpp"

#include <cmath>
#include <string>

#include "mvt/error.hpp"

namespace mvt {

namespace {

void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(Errc::DimensionMismatch, std::string(what) + " has length " + std::to_string(got) +
                                             ", expected " + std::to_string(want));
  }
}

const Partition& conditioning_partition(const MVTParams& p, const Partition& part) {
  if (part.dim() != p.dim()) {
    throw Error(Errc::InvalidPartition, "partition covers " + std::to_string(part.dim()) +
                                            " coordinates, law has " + std::to_string(p.dim()));
  }
  if (part.p2() == 0) throw Error(Errc::InvalidPartition, "free block is empty, nothing left to condition");
  return part;
}

}  // namespace

PartitionedLaw::PartitionedLaw(const MVTParams& params, const Partition& part)
    : params_(params),
      part_(conditioning_partition(params, part)),
      mu1_(linalg::gather(params.mu(), part.block1())),
      mu2_(linalg::gather(params.mu(), part.block2())),
      base_scale_(linalg::schur_complement(params.sigma(), part)),
      base_factor_(linalg::cholesky(base_scale_)) {
  if (part_.p1() == 0) return;
  f11_.emplace(linalg::cholesky(linalg::submatrix(params.sigma(), part_.block1())));
  cross_.assign(part_.p2(), Vector(part_.p1()));
  for (std::size_t i = 0; i < part_.p2(); ++i)
    for (std::size_t k = 0; k < part_.p1(); ++k) cross_[i][k] = params.sigma()(part_.block2()[i], part_.block1()[k]);
}

void PartitionedLaw::check_x1(std::span<const double> x1) const {
  require_len(x1.size(), p1(), "observed values");
  for (double v : x1) {
    if (!std::isfinite(v)) throw Error(Errc::InvalidParams, "observed value is not finite");
  }
}

double PartitionedLaw::d1(std::span<const double> x1) const {
  check_x1(x1);
  if (p1() == 0) return 0.0;
  return linalg::mahalanobis_sq(x1, mu1_, *f11_);
}

Vector PartitionedLaw::regression_location(std::span<const double> x1) const {
  check_x1(x1);
  Vector loc = mu2_;
  if (p1() == 0) return loc;
  // Solve against the displacement first: Sigma21 (Sigma11^-1 (x1 - mu1)).
  // This keeps the location exact in the common case where the displacement
  // is a multiple of a Sigma11 column.
  Vector diff(p1());
  for (std::size_t k = 0; k < p1(); ++k) diff[k] = x1[k] - mu1_[k];
  const Vector w = linalg::solve_spd(*f11_, diff);
  for (std::size_t i = 0; i < p2(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < p1(); ++k) s += cross_[i][k] * w[k];
    loc[i] += s;
  }
  return loc;
}

ConditionalSpec PartitionedLaw::spec(std::span<const double> x1) const {
  ConditionalSpec s;
  s.location = regression_location(x1);
  s.base_scale = base_scale_;
  s.d1 = d1(x1);
  const double nu = params_.nu();
  s.dof = nu + static_cast<double>(p1());
  s.inflation = (nu + s.d1) / s.dof;
  return s;
}

Conditional PartitionedLaw::condition(std::span<const double> x1) const {
  ConditionalSpec s = spec(x1);
  MVTParams law(s.location, s.inflation * s.base_scale, s.dof);
  return Conditional{std::move(s), std::move(law)};
}

ScaledChiSquare PartitionedLaw::q_posterior(std::span<const double> x1) const {
  const double nu = params_.nu();
  return ScaledChiSquare(nu + static_cast<double>(p1()), nu + d1(x1));
}

double PartitionedLaw::unnormalized_conditional_logpdf(std::span<const double> x1,
                                                       std::span<const double> x2) const {
  require_len(x2.size(), p2(), "free values");
  const ConditionalSpec s = spec(x1);
  // r^T (inflation * S22|1)^{-1} r
  const double quad = linalg::mahalanobis_sq(x2, s.location, base_factor_) / s.inflation;
  const double total = s.dof + static_cast<double>(p2());
  return -0.5 * total * std::log1p(quad / s.dof);
}

Vector PartitionedLaw::independence_residual(std::span<const double> x1, std::span<const double> x2) const {
  require_len(x2.size(), p2(), "free values");
  const ConditionalSpec s = spec(x1);
  const double scale = std::sqrt(1.0 / s.inflation);
  Vector r(p2());
  for (std::size_t i = 0; i < p2(); ++i) r[i] = scale * (x2[i] - s.location[i]);
  return r;
}

Vector PartitionedLaw::sample_augmented(std::span<const double> x1, RngStream& rng) const {
  const ScaledChiSquare posterior = q_posterior(x1);
  const Vector loc = regression_location(x1);
  const double w = sample_scaled_chisq(posterior, rng);
  const double inv_sqrt_w = 1.0 / std::sqrt(w);
  Vector z(p2());
  for (double& v : z) v = rng.normal() * inv_sqrt_w;
  Vector x2 = linalg::lower_multiply(base_factor_, z);
  for (std::size_t i = 0; i < p2(); ++i) x2[i] += loc[i];
  return x2;
}

MVTParams marginal(const MVTParams& p, const Partition& part) {
  if (part.dim() != p.dim()) {
    throw Error(Errc::InvalidPartition, "partition covers " + std::to_string(part.dim()) +
                                            " coordinates, law has " + std::to_string(p.dim()));
  }
  if (part.p1() == 0) throw Error(Errc::InvalidPartition, "kept block is empty");
  return MVTParams(linalg::gather(p.mu(), part.block1()), linalg::submatrix(p.sigma(), part.block1()), p.nu());
}

Vector regression_location(const MVTParams& p, const Partition& part, std::span<const double> x1) {
  return PartitionedLaw(p, part).regression_location(x1);
}

Conditional condition(const MVTParams& p, const Partition& part, std::span<const double> x1) {
  return PartitionedLaw(p, part).condition(x1);
}

ScaledChiSquare q_posterior(const MVTParams& p, const Partition& part, std::span<const double> x1) {
  return PartitionedLaw(p, part).q_posterior(x1);
}

std::vector<Vector> conditional_sample_augmented(const MVTParams& p, const Partition& part,
                                                 std::span<const double> x1, std::size_t n, RngStream& rng) {
  const PartitionedLaw law(p, part);
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(law.sample_augmented(x1, rng));
  return out;
}

double unnormalized_conditional_logpdf(const MVTParams& p, const Partition& part, std::span<const double> x1,
                                       std::span<const double> x2) {
  return PartitionedLaw(p, part).unnormalized_conditional_logpdf(x1, x2);
}

Vector independence_residual(const MVTParams& p, const Partition& part, std::span<const double> x1,
                             std::span<const double> x2) {
  return PartitionedLaw(p, part).independence_residual(x1, x2);
}

}  // namespace mvt
