#include "mvt/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mvt/error.hpp"
#include "mvt/quadrature.hpp"
#include "mvt/special.hpp"

namespace mvt::verify {

namespace {

// int N(x; location, S/q) g(q) dq with g = mixing, S factored by scale.
//
// Integrated in t = log q, where the integrand q N g is a smooth single bump.
// The log-integrand is shifted by its largest value on a coarse grid so the
// absolute tolerance is measured against the peak.
//
// The domain is cut at the eps and 1 - eps quantiles of g. The dropped part
// is at most eps * sup N over each dropped tail, and N(q) is unimodal in q
// with mode k/m, so the bound is computable. When x sits far out the mass of
// the integrand can live deep in a tail of g; eps is then shrunk per tail
// until the bound falls well under rel_tol times the estimate.
double latent_scale_quadrature(const ScaledChiSquare& mixing, const SPDFactor& scale,
                               std::span<const double> location, std::span<const double> x,
                               const QuadratureSpec& spec) {
  const double k = static_cast<double>(scale.dim());
  const double m = linalg::mahalanobis_sq(x, location, scale);
  const double log_norm = -0.5 * k * std::log(2.0 * std::numbers::pi) - 0.5 * scale.log_det();

  const double shape = mixing.shape();
  const double rate = mixing.rate();
  auto log_normal = [&](double q) { return log_norm + 0.5 * k * std::log(q) - 0.5 * q * m; };
  auto log_integrand = [&](double t) {
    const double q = std::exp(t);
    return t + log_normal(q) + scaled_chisq_log_pdf(mixing, q);
  };
  const double normal_mode = m > 0.0 ? k / m : std::numeric_limits<double>::infinity();
  // Stationary point of the log-integrand in t.
  const double mode = std::log((shape + 0.5 * k) / (rate + 0.5 * m));

  quadrature::Options opts;
  opts.rel_tol = spec.rel_tol;
  opts.abs_tol = spec.abs_tol;
  opts.max_panels = spec.max_panels;

  constexpr std::array<double, 7> kCuts = {1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 1.0 - 1e-6};
  constexpr double kMinTail = 1e-300;
  double eps_lo = spec.truncation_mass;
  double eps_hi = spec.truncation_mass;
  for (;;) {
    const double q_lo = special::gamma_quantile(shape, eps_lo) / rate;
    const double q_hi = special::gamma_upper_quantile(shape, eps_hi) / rate;
    std::vector<double> breaks{std::log(q_lo), std::log(q_hi)};
    for (double c : kCuts) {
      const double t = std::log(special::gamma_quantile(shape, c) / rate);
      if (t > breaks[0] && t < breaks[1]) breaks.push_back(t);
    }
    if (mode > breaks[0] && mode < breaks[1]) breaks.push_back(mode);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      for (int j = 0; j <= 8; ++j) {
        peak = std::max(peak, log_integrand(breaks[i] + (breaks[i + 1] - breaks[i]) * j / 8.0));
      }
    }
    const auto r = quadrature::integrate([&](double t) { return std::exp(log_integrand(t) - peak); }, breaks, opts);
    const double log_value = std::log(r.value) + peak;

    // Tail bounds relative to the estimate, in logs to survive underflow.
    const double log_budget = std::log(0.01 * spec.rel_tol) + log_value;
    const double lo_excess = std::log(eps_lo) + log_normal(std::min(q_lo, normal_mode)) - log_budget;
    const double hi_excess = std::log(eps_hi) + log_normal(std::max(q_hi, normal_mode)) - log_budget;
    bool refined = false;
    if (lo_excess > 0.0 && eps_lo > kMinTail) {
      eps_lo = std::max(kMinTail, eps_lo * std::exp(-lo_excess - 1.0));
      refined = true;
    }
    if (hi_excess > 0.0 && eps_hi > kMinTail) {
      eps_hi = std::max(kMinTail, eps_hi * std::exp(-hi_excess - 1.0));
      refined = true;
    }
    if (!refined) return std::exp(log_value);
  }
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double conditional_pdf_quadrature(const MVTParams& p, const Partition& part, std::span<const double> x1,
                                  std::span<const double> x2, const QuadratureSpec& spec) {
  const PartitionedLaw law(p, part);
  if (x2.size() != law.p2()) {
    throw Error(Errc::DimensionMismatch,
                "free values have length " + std::to_string(x2.size()) + ", expected " + std::to_string(law.p2()));
  }
  return latent_scale_quadrature(law.q_posterior(x1), law.base_factor(), law.regression_location(x1), x2, spec);
}

double mixture_pdf_quadrature(const MVTParams& p, std::span<const double> x, const QuadratureSpec& spec) {
  return latent_scale_quadrature(ScaledChiSquare(p.nu(), p.nu()), p.factor(), p.mu(), x, spec);
}

double student_t_cdf(double x, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(Errc::InvalidDof, "nu = " + std::to_string(nu));
  if (std::isnan(x)) return x;
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  // Two-sided tail mass P(|T| > |x|) = I_t(nu/2, 1/2), t = nu/(nu+x^2).
  // Near the centre t is close to 1, so go through the complement
  // u = x^2/(nu+x^2) computed directly.
  const double x2 = x * x;
  const double a = 0.5 * nu;
  const double b = 0.5;
  const double t = nu / (nu + x2);
  double two_sided;
  if (t < (a + 1.0) / (a + b + 2.0)) {
    two_sided = special::beta_inc(a, b, t);
  } else {
    two_sided = 1.0 - special::beta_inc(b, a, x2 / (nu + x2));
  }
  const double tail = 0.5 * two_sided;
  return x > 0 ? 1.0 - tail : tail;
}

GofReport make_report(double statistic, double threshold, std::size_t n, std::uint64_t seed) {
  return GofReport{statistic, threshold, n, statistic <= threshold, seed};
}

GofReport ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(Errc::EmptySample, "no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
  }
  return make_report(d, kKsCritical / std::sqrt(n), sorted.size());
}

GofReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "two-sample KS needs both samples nonempty");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return make_report(d, kKsCritical * std::sqrt((na + nb) / (na * nb)), sa.size() + sb.size());
}

IndependenceReport independence_check(const MVTParams& p, const Partition& part, std::size_t n, RngStream& rng,
                                      ResidualKind kind) {
  if (n < 10'000) throw Error(Errc::InvalidParams, "independence check needs n >= 10000");
  const PartitionedLaw law(p, part);
  const std::size_t p1 = law.p1();
  const std::size_t p2 = law.p2();
  if (p1 == 0) throw Error(Errc::InvalidPartition, "observed block is empty");

  std::vector<std::vector<double>> x1_cols(p1, std::vector<double>(n));
  std::vector<std::vector<double>> res_cols(p2, std::vector<double>(n));
  std::vector<double> d1(n);
  for (std::size_t s = 0; s < n; ++s) {
    const Vector x = sample_one(p, rng);
    const Vector x1 = linalg::gather(x, part.block1());
    const Vector x2 = linalg::gather(x, part.block2());
    d1[s] = law.d1(x1);
    Vector r;
    if (kind == ResidualKind::Scaled) {
      r = law.independence_residual(x1, x2);
    } else {
      r = law.regression_location(x1);
      for (std::size_t k = 0; k < p2; ++k) r[k] = x2[k] - r[k];
    }
    for (std::size_t j = 0; j < p1; ++j) x1_cols[j][s] = x1[j];
    for (std::size_t k = 0; k < p2; ++k) res_cols[k][s] = r[k];
  }

  double max_corr = 0.0;
  for (const auto& a : x1_cols)
    for (const auto& b : res_cols) max_corr = std::max(max_corr, std::abs(pearson(a, b)));

  std::vector<double> sorted_d1 = d1;
  const auto mid = sorted_d1.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(sorted_d1.begin(), mid, sorted_d1.end());
  const double median = *mid;

  double max_ks = 0.0;
  double ks_threshold = 0.0;
  for (const auto& col : res_cols) {
    std::vector<double> low, high;
    low.reserve(n / 2 + 1);
    high.reserve(n / 2 + 1);
    for (std::size_t s = 0; s < n; ++s) (d1[s] < median ? low : high).push_back(col[s]);
    const GofReport r = ks_two_sample(low, high);
    max_ks = std::max(max_ks, r.statistic);
    ks_threshold = r.threshold;
  }

  IndependenceReport report;
  report.correlation = make_report(max_corr, 4.0 / std::sqrt(static_cast<double>(n)), n, rng.seed());
  report.split_ks = make_report(max_ks, ks_threshold, n, rng.seed());
  return report;
}

MomentReport moment_suite(const MVTParams& p, const Partition& part, std::size_t n, RngStream& rng) {
  const double nu = p.nu();
  if (!(nu > 2.0)) throw Error(Errc::DofTooSmall, "mean of d1 is infinite for nu <= 2, got " + std::to_string(nu));
  if (n < 100'000) throw Error(Errc::InvalidParams, "moment suite needs n >= 100000");
  const PartitionedLaw law(p, part);
  if (law.p1() == 0) throw Error(Errc::InvalidPartition, "observed block is empty");
  const double p1 = static_cast<double>(law.p1());

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const Vector x = sample_one(p, rng);
    const double d = law.d1(linalg::gather(x, part.block1()));
    sum += d;
    sum_sq += d * d;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = (sum_sq - nn * mean * mean) / (nn - 1.0);
  const double se = std::sqrt(var / nn);

  MomentReport report;
  report.expected_d1 = p1 * nu / (nu - 2.0);
  report.empirical_d1 = mean;
  report.mean_inflation = (nu + mean) / (nu + p1);
  report.d1_mean = make_report(std::abs(mean - report.expected_d1), 4.0 * se, n, rng.seed());
  return report;
}

}  // namespace mvt::verify
