#ifndef MVT_QUADRATURE_HPP
#define MVT_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>

namespace mvt::quadrature {

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_panels = 10'000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod. The panel with the largest
/// |K15 - G7| is halved until the summed error meets
/// max(abs_tol, rel_tol * |value|). Breakpoints (sorted, at least two) seed
/// the initial panels.
///
/// Throws Error{QuadratureNonConvergence} when max_panels is exhausted.
Result integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Options& opts = {});

inline Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opts = {}) {
  const double ends[] = {a, b};
  return integrate(f, ends, opts);
}

}  // namespace mvt::quadrature

#endif  // MVT_QUADRATURE_HPP
