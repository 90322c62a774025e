#ifndef MVT_VERIFICATION_HPP
#define MVT_VERIFICATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "mvt/conditioning.hpp"
#include "mvt/distribution.hpp"

namespace mvt::verify {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  /// Mass of the latent-scale law dropped in each tail.
  double truncation_mass = 1e-12;
  std::size_t max_panels = 10'000;
};

/// Conditional density of x2 given x1 computed without the closed form:
///
///   f(x2 | x1) = int N(x2; location, base_scale / q) g(q | x1) dq
///
/// with g the chi^2_{nu+p1}/(nu+d1) posterior of the latent scale. The
/// integral runs over the posterior's [m, 1-m] quantile range, m = truncation_mass.
double conditional_pdf_quadrature(const MVTParams& p, const Partition& part, std::span<const double> x1,
                                  std::span<const double> x2, const QuadratureSpec& spec = {});

/// Joint density as the gamma mixture int N(x; mu, Sigma/q) g(q) dq over the
/// prior chi^2_nu/nu.
double mixture_pdf_quadrature(const MVTParams& p, std::span<const double> x, const QuadratureSpec& spec = {});

/// CDF of the standard univariate t with nu degrees of freedom, via the
/// regularized incomplete beta function. Throws InvalidDof for nu <= 0.
double student_t_cdf(double x, double nu);

/// Goodness-of-fit outcome. pass == (statistic <= threshold).
struct GofReport {
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t n = 0;
  bool pass = false;
  std::uint64_t seed = 0;
};

GofReport make_report(double statistic, double threshold, std::size_t n, std::uint64_t seed = 0);

/// Asymptotic Kolmogorov quantile used for every KS threshold (alpha ~ 0.01).
inline constexpr double kKsCritical = 1.63;

/// One-sample KS: sup |F_n - cdf| over both one-sided gaps at each order
/// statistic; threshold 1.63 / sqrt(n). Throws EmptySample.
GofReport ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS; threshold 1.63 sqrt((n + m) / (n m)). Throws EmptySample.
GofReport ks_two_sample(std::span<const double> a, std::span<const double> b);

enum class ResidualKind {
  Scaled,    // sqrt((nu+p1)/(nu+d1)) (x2 - location)
  Unscaled,  // x2 - location; negative control
};

struct IndependenceReport {
  /// max |corr(X1_j, residual_k)|, threshold 4/sqrt(n).
  GofReport correlation;
  /// max over residual coordinates of the two-sample KS between draws with d1
  /// below and above its empirical median.
  GofReport split_ks;
  bool pass() const noexcept { return correlation.pass && split_ks.pass; }
};

/// Draws n >= 10^4 joint samples and tests that the residual is independent of X1.
IndependenceReport independence_check(const MVTParams& p, const Partition& part, std::size_t n, RngStream& rng,
                                      ResidualKind kind = ResidualKind::Scaled);

struct MomentReport {
  /// |mean(d1) - p1 nu/(nu-2)| against 4 standard errors.
  GofReport d1_mean;
  double expected_d1 = 0.0;
  double empirical_d1 = 0.0;
  double mean_inflation = 0.0;
  bool pass() const noexcept { return d1_mean.pass && mean_inflation > 1.0; }
};

/// Monte Carlo check of E[d1] = p1 nu/(nu-2) and E[(nu+d1)/(nu+p1)] > 1.
/// Throws DofTooSmall for nu <= 2 and InvalidParams for n < 10^5.
MomentReport moment_suite(const MVTParams& p, const Partition& part, std::size_t n, RngStream& rng);

}  // namespace mvt::verify

#endif  // MVT_VERIFICATION_HPP
