#include "mvt/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "mvt/conditioning.hpp"
#include "mvt/error.hpp"
#include "mvt/io.hpp"
#include "mvt/verification.hpp"

namespace mvt::verify {

namespace {

using nlohmann::json;

constexpr double kChainRuleTol = 1e-10;
constexpr double kProportionalityTol = 1e-10;
constexpr double kQuadratureRelTol = 1e-6;
constexpr int kSeedsPerCheck = 3;
constexpr int kSeedsToPass = 2;

std::size_t uniform_index(RngStream& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
}

Vector random_point(const MVTParams& law, RngStream& rng) {
  // Half the points come from the law itself, half from a wide box around mu.
  if (rng.uniform() < 0.5) return sample_one(law, rng);
  Vector x = law.mu();
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += (2.0 * rng.uniform() - 1.0) * 6.0 * std::sqrt(law.sigma()(i, i));
  }
  return x;
}

json law_label(const MVTParams& law, std::size_t index) {
  return json{{"law", index}, {"dim", law.dim()}, {"nu", law.nu()}};
}

json skipped(json label, const std::string& reason) {
  label["status"] = "skipped";
  label["reason"] = reason;
  label["pass"] = true;
  return label;
}

json finish(std::string_view name, json checks) {
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
  return json{{"suite", name}, {"pass", pass}, {"checks", std::move(checks)}};
}

json chain_rule_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, RngStream rng) {
  json checks = json::array();
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    if (law.dim() < 2) {
      checks.push_back(skipped(law_label(law, li), "dimension 1 has no partition"));
      continue;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < opts.instances; ++k) {
      const Partition part = random_partition(law.dim(), rng);
      const Vector x = random_point(law, rng);
      const Vector x1 = linalg::gather(x, part.block1());
      const Vector x2 = linalg::gather(x, part.block2());
      const double joint = log_pdf(law, x);
      const double split = log_pdf(marginal(law, part), x1) + log_pdf(condition(law, part, x1).law, x2);
      worst = std::max(worst, std::abs(joint - split));
    }
    json c = law_label(law, li);
    c["max_abs_error"] = worst;
    c["tolerance"] = kChainRuleTol;
    c["instances"] = opts.instances;
    c["pass"] = worst < kChainRuleTol;
    checks.push_back(std::move(c));
  }
  return finish("chain-rule", std::move(checks));
}

json proportionality_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, RngStream rng) {
  json checks = json::array();
  const std::size_t grid = 100;
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    if (law.dim() < 2) {
      checks.push_back(skipped(law_label(law, li), "dimension 1 has no partition"));
      continue;
    }
    double worst = 0.0;
    const std::size_t cases = std::max<std::size_t>(1, opts.instances / 10);
    for (std::size_t k = 0; k < cases; ++k) {
      const Partition part = random_partition(law.dim(), rng);
      const Vector x1 = linalg::gather(random_point(law, rng), part.block1());
      const PartitionedLaw pl(law, part);
      const Conditional cond = pl.condition(x1);
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t g = 0; g < grid; ++g) {
        const Vector x2 = linalg::gather(random_point(law, rng), part.block2());
        const double diff = pl.unnormalized_conditional_logpdf(x1, x2) - log_pdf(cond.law, x2);
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
      }
      worst = std::max(worst, hi - lo);
    }
    json c = law_label(law, li);
    c["max_spread"] = worst;
    c["tolerance"] = kProportionalityTol;
    c["pass"] = worst < kProportionalityTol;
    checks.push_back(std::move(c));
  }
  return finish("eq4-proportionality", std::move(checks));
}

json quadrature_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, RngStream rng) {
  json checks = json::array();
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    double worst = 0.0;
    const std::size_t cases = std::max<std::size_t>(1, opts.instances / 4);
    for (std::size_t k = 0; k < cases; ++k) {
      const Vector x = random_point(law, rng);
      double exact, numeric;
      if (law.dim() < 2) {
        exact = pdf(law, x);
        numeric = mixture_pdf_quadrature(law, x);
      } else {
        const Partition part = random_partition(law.dim(), rng);
        const Vector x1 = linalg::gather(x, part.block1());
        const Vector x2 = linalg::gather(x, part.block2());
        exact = pdf(condition(law, part, x1).law, x2);
        numeric = conditional_pdf_quadrature(law, part, x1, x2);
      }
      worst = std::max(worst, std::abs(numeric - exact) / exact);
    }
    json c = law_label(law, li);
    c["max_rel_error"] = worst;
    c["tolerance"] = kQuadratureRelTol;
    c["pass"] = worst < kQuadratureRelTol;
    checks.push_back(std::move(c));
  }
  return finish("quadrature", std::move(checks));
}

// Runs `one` on kSeedsPerCheck split streams; passes when kSeedsToPass do.
json majority(const std::function<GofReport(RngStream&)>& one, const RngStream& base, std::uint64_t tag) {
  json runs = json::array();
  int passed = 0;
  for (int s = 0; s < kSeedsPerCheck; ++s) {
    RngStream rng = base.split(tag * 16 + static_cast<std::uint64_t>(s));
    GofReport r = one(rng);
    r.seed = rng.seed();
    passed += r.pass ? 1 : 0;
    runs.push_back(io::to_json(r));
  }
  return json{{"runs", std::move(runs)}, {"pass", passed >= kSeedsToPass}};
}

json sampling_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, const RngStream& base) {
  json checks = json::array();
  std::uint64_t tag = 0;
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    // Standardized coordinate 0 of joint draws against the univariate t.
    json c = law_label(law, li);
    c["check"] = "joint-sampling-coordinate-0";
    c.update(majority(
        [&](RngStream& rng) {
          std::vector<double> z(opts.mc_samples);
          const double scale = std::sqrt(law.sigma()(0, 0));
          for (auto& v : z) v = (sample_one(law, rng)[0] - law.mu()[0]) / scale;
          return ks_statistic(z, [&](double t) { return student_t_cdf(t, law.nu()); });
        },
        base, tag++));
    checks.push_back(std::move(c));

    if (law.dim() < 2) continue;
    RngStream setup = base.split(1000 + li);
    const Partition part = random_partition(law.dim(), setup);
    const Vector x1 = linalg::gather(sample_one(law, setup), part.block1());
    const PartitionedLaw pl(law, part);
    const Conditional cond = pl.condition(x1);
    json cc = law_label(law, li);
    cc["check"] = "two-stage-conditional-coordinate-0";
    cc["observed"] = part.block1();
    cc["dof"] = cond.spec.dof;
    cc.update(majority(
        [&](RngStream& rng) {
          std::vector<double> z(opts.mc_samples);
          const double scale = std::sqrt(cond.law.sigma()(0, 0));
          for (auto& v : z) v = (pl.sample_augmented(x1, rng)[0] - cond.spec.location[0]) / scale;
          return ks_statistic(z, [&](double t) { return student_t_cdf(t, cond.spec.dof); });
        },
        base, tag++));
    checks.push_back(std::move(cc));
  }
  return finish("sampling-gof", std::move(checks));
}

json independence_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, const RngStream& base) {
  json checks = json::array();
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 10'000);
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    if (law.dim() < 2) {
      checks.push_back(skipped(law_label(law, li), "dimension 1 has no partition"));
      continue;
    }
    if (!(law.nu() > 2.0)) {
      checks.push_back(skipped(law_label(law, li), "correlation needs finite variance (nu > 2)"));
      continue;
    }
    const Partition part = Partition::observe({0}, law.dim());
    json c = law_label(law, li);
    json runs = json::array();
    int passed = 0;
    for (int s = 0; s < kSeedsPerCheck; ++s) {
      RngStream rng = base.split(2000 + li * 16 + static_cast<std::uint64_t>(s));
      const IndependenceReport r = independence_check(law, part, n, rng);
      passed += r.pass() ? 1 : 0;
      runs.push_back(json{{"correlation", io::to_json(r.correlation)},
                          {"split_ks", io::to_json(r.split_ks)},
                          {"pass", r.pass()}});
    }
    c["runs"] = std::move(runs);
    c["pass"] = passed >= kSeedsToPass;
    checks.push_back(std::move(c));
  }
  return finish("independence", std::move(checks));
}

json moments_suite(const std::vector<MVTParams>& laws, const SuiteOptions& opts, const RngStream& base) {
  json checks = json::array();
  const std::size_t n = std::max<std::size_t>(opts.mc_samples, 100'000);
  for (std::size_t li = 0; li < laws.size(); ++li) {
    const MVTParams& law = laws[li];
    if (!(law.nu() > 2.0)) {
      checks.push_back(skipped(law_label(law, li), std::string(to_string(Errc::DofTooSmall))));
      continue;
    }
    if (law.dim() < 2) {
      checks.push_back(skipped(law_label(law, li), "dimension 1 has no partition"));
      continue;
    }
    const std::size_t p1 = law.dim() / 2;
    std::vector<std::size_t> observed(p1);
    std::iota(observed.begin(), observed.end(), std::size_t{0});
    const Partition part = Partition::observe(observed, law.dim());
    json c = law_label(law, li);
    json runs = json::array();
    int passed = 0;
    for (int s = 0; s < kSeedsPerCheck; ++s) {
      RngStream rng = base.split(3000 + li * 16 + static_cast<std::uint64_t>(s));
      const MomentReport r = moment_suite(law, part, n, rng);
      passed += r.pass() ? 1 : 0;
      runs.push_back(json{{"d1_mean", io::to_json(r.d1_mean)},
                          {"expected_d1", r.expected_d1},
                          {"empirical_d1", r.empirical_d1},
                          {"mean_inflation", r.mean_inflation},
                          {"pass", r.pass()}});
    }
    c["observed_dim"] = p1;
    c["runs"] = std::move(runs);
    c["pass"] = passed >= kSeedsToPass;
    checks.push_back(std::move(c));
  }
  return finish("moments", std::move(checks));
}

}  // namespace

bool is_suite_name(std::string_view name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

MVTParams random_law(std::size_t p, double nu, RngStream& rng) {
  Matrix a(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a(i, j) = rng.normal();
  Matrix sigma = Matrix::identity(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) sigma(i, j) += a(i, k) * a(j, k);
  Vector mu(p);
  for (double& v : mu) v = rng.normal();
  return MVTParams(std::move(mu), std::move(sigma), nu);
}

Partition random_partition(std::size_t p, RngStream& rng) {
  if (p < 2) throw Error(Errc::InvalidPartition, "need at least two coordinates to split");
  std::vector<std::size_t> idx(p);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = p - 1; i > 0; --i) std::swap(idx[i], idx[uniform_index(rng, i + 1)]);
  const std::size_t p1 = 1 + uniform_index(rng, p - 1);
  return Partition(std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(p1)),
                   std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(p1), idx.end()), p);
}

std::vector<MVTParams> builtin_battery() {
  std::vector<MVTParams> laws;
  laws.emplace_back(Vector{0.0, 0.0}, Matrix{{2.0, 1.0}, {1.0, 3.0}}, 5.0);
  laws.emplace_back(Vector{1.0, -1.0}, Matrix{{1.0, 0.5}, {0.5, 2.0}}, 1.0);
  laws.emplace_back(Vector{0.5, -0.25, 2.0}, Matrix{{2.0, 0.3, -0.2}, {0.3, 1.5, 0.4}, {-0.2, 0.4, 1.0}}, 3.0);
  laws.emplace_back(Vector{0.0, 1.0, -2.0, 0.5},
                    Matrix{{4.0, 1.0, 0.5, 0.0}, {1.0, 3.0, 0.2, -0.4}, {0.5, 0.2, 2.0, 0.3}, {0.0, -0.4, 0.3, 1.0}},
                    0.5);
  laws.emplace_back(Vector{-1.0, 2.0, 0.0}, Matrix{{1.0, -0.3, 0.1}, {-0.3, 2.0, 0.6}, {0.1, 0.6, 1.5}}, 30.0);
  laws.emplace_back(Vector{0.0}, Matrix{{1.0}}, 10.0);
  return laws;
}

json run_suite(std::string_view suite, const std::vector<MVTParams>& laws, const SuiteOptions& opts) {
  const RngStream base(opts.seed);
  if (suite == "chain-rule") return chain_rule_suite(laws, opts, base.split(1));
  if (suite == "eq4-proportionality") return proportionality_suite(laws, opts, base.split(2));
  if (suite == "quadrature") return quadrature_suite(laws, opts, base.split(3));
  if (suite == "sampling-gof") return sampling_suite(laws, opts, base.split(4));
  if (suite == "independence") return independence_suite(laws, opts, base.split(5));
  if (suite == "moments") return moments_suite(laws, opts, base.split(6));
  if (suite == "all") {
    json reports = json::array();
    bool pass = true;
    for (std::string_view name : kSuiteNames) {
      if (name == "all") continue;
      json r = run_suite(name, laws, opts);
      pass = pass && r.at("pass").get<bool>();
      reports.push_back(std::move(r));
    }
    return json{{"suite", "all"}, {"pass", pass}, {"seed", opts.seed}, {"suites", std::move(reports)}};
  }
  throw Error(Errc::InvalidParams, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace mvt::verify
