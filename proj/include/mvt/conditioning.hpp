#ifndef MVT_CONDITIONING_HPP
#define MVT_CONDITIONING_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mvt/distribution.hpp"
#include "mvt/partition.hpp"

namespace mvt {

/// Ingredients of the law of X2 given X1 = x1 under a joint t_p(mu, Sigma, nu):
///
///   X2 | X1 = x1  ~  t_{p2}(location, inflation * base_scale, dof)
///
/// with location = mu2 + S21 S11^{-1} (x1 - mu1), base_scale = S22 - S21 S11^{-1} S12,
/// d1 = (x1 - mu1)^T S11^{-1} (x1 - mu1), inflation = (nu + d1)/(nu + p1), dof = nu + p1.
struct ConditionalSpec {
  Vector location;
  Matrix base_scale;
  double inflation = 1.0;
  double dof = 0.0;
  double d1 = 0.0;
};

struct Conditional {
  ConditionalSpec spec;
  MVTParams law;
};

/// Precomputed block quantities for one (law, partition) pair. The free
/// functions below build one per call; hold on to an instance when
/// conditioning the same law on many observations.
class PartitionedLaw {
 public:
  /// Throws InvalidPartition if part.dim() != params.dim() or block2 is empty,
  /// and propagates factorization errors.
  PartitionedLaw(const MVTParams& params, const Partition& part);

  const MVTParams& params() const noexcept { return params_; }
  const Partition& partition() const noexcept { return part_; }
  std::size_t p1() const noexcept { return part_.p1(); }
  std::size_t p2() const noexcept { return part_.p2(); }
  const Matrix& base_scale() const noexcept { return base_scale_; }
  const SPDFactor& base_factor() const noexcept { return base_factor_; }

  /// Squared Mahalanobis distance of x1 from mu1 under Sigma11.
  double d1(std::span<const double> x1) const;
  Vector regression_location(std::span<const double> x1) const;
  ConditionalSpec spec(std::span<const double> x1) const;
  Conditional condition(std::span<const double> x1) const;
  ScaledChiSquare q_posterior(std::span<const double> x1) const;
  double unnormalized_conditional_logpdf(std::span<const double> x1, std::span<const double> x2) const;
  Vector independence_residual(std::span<const double> x1, std::span<const double> x2) const;
  /// Two-stage draw: w ~ q_posterior(x1), then location + L22 z / sqrt(w).
  Vector sample_augmented(std::span<const double> x1, RngStream& rng) const;

 private:
  void check_x1(std::span<const double> x1) const;

  MVTParams params_;
  Partition part_;
  Vector mu1_;
  Vector mu2_;
  std::optional<SPDFactor> f11_;  // unset when p1 == 0
  std::vector<Vector> cross_;  // rows of Sigma21
  Matrix base_scale_;
  SPDFactor base_factor_;
};

/// Law of X restricted to part.block1(), in block1 order. Throws
/// InvalidPartition when block1 is empty.
MVTParams marginal(const MVTParams& p, const Partition& part);

Vector regression_location(const MVTParams& p, const Partition& part, std::span<const double> x1);
Conditional condition(const MVTParams& p, const Partition& part, std::span<const double> x1);
/// chi^2_{nu + p1} / (nu + d1).
ScaledChiSquare q_posterior(const MVTParams& p, const Partition& part, std::span<const double> x1);
std::vector<Vector> conditional_sample_augmented(const MVTParams& p, const Partition& part,
                                                 std::span<const double> x1, std::size_t n, RngStream& rng);
/// -((nu+p1+p2)/2) log{1 + (nu+p1)^{-1} r^T [inflation * base_scale]^{-1} r}, r = x2 - location.
/// Differs from the conditional log density by a constant depending on x1 only.
double unnormalized_conditional_logpdf(const MVTParams& p, const Partition& part, std::span<const double> x1,
                                       std::span<const double> x2);
/// sqrt((nu+p1)/(nu+d1)) (x2 - location); independent of X1 under the joint law.
Vector independence_residual(const MVTParams& p, const Partition& part, std::span<const double> x1,
                             std::span<const double> x2);

}  // namespace mvt

#endif  // MVT_CONDITIONING_HPP
