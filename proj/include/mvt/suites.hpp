#ifndef MVT_SUITES_HPP
#define MVT_SUITES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <string_view>
#include <vector>

#include "mvt/distribution.hpp"
#include "mvt/partition.hpp"

namespace mvt::verify {

inline constexpr std::array<std::string_view, 7> kSuiteNames = {
    "chain-rule", "eq4-proportionality", "quadrature", "sampling-gof", "independence", "moments", "all",
};

bool is_suite_name(std::string_view name);

struct SuiteOptions {
  std::uint64_t seed = 42;
  /// Draws per Monte Carlo check.
  std::size_t mc_samples = 200'000;
  /// Randomized (law, partition, point) instances per deterministic suite.
  std::size_t instances = 200;
};

/// Random law with mu_i ~ N(0, 1) and Sigma = A A^T + I, A_ij ~ N(0, 1).
MVTParams random_law(std::size_t p, double nu, RngStream& rng);
/// Random split with both blocks nonempty; p >= 2.
Partition random_partition(std::size_t p, RngStream& rng);

/// Fixed set of laws covering nu below 1, the Cauchy case, and moderate and
/// large dof, in dimensions 1 to 4.
std::vector<MVTParams> builtin_battery();

/// Runs one suite (or "all") over `laws`. Returns
/// {"suite": name, "pass": bool, "checks": [...]}; "all" nests the per-suite
/// reports under "suites". Monte Carlo checks use streams split from seed and
/// pass when at least 2 of 3 independent seeds pass.
///
/// Throws Error{InvalidParams} for an unknown suite name.
nlohmann::json run_suite(std::string_view suite, const std::vector<MVTParams>& laws, const SuiteOptions& opts);

}  // namespace mvt::verify

#endif  // MVT_SUITES_HPP
