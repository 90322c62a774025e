#include "mvt/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mvt::special {

namespace {

constexpr int kMaxIterations = 1'000'000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// exp(a log x - x - log Gamma(a)), the common prefactor of P and Q.
double gamma_prefactor(double a, double x) {
  return std::exp(a * std::log(x) - x - log_gamma(a));
}

double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * gamma_prefactor(a, x);
}

// Q(a, x) by Lentz's continued fraction, valid for x > a + 1.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return gamma_prefactor(a, x) * h;
}

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

// Root of P(a, x) = prob (lower) or Q(a, x) = prob (upper) by bisection in log x.
double gamma_root(double shape, double prob, bool upper) {
  auto below = [&](double x) {
    // True when x lies left of the target quantile.
    return upper ? gamma_q(shape, x) > prob : gamma_p(shape, x) < prob;
  };
  double lo = shape;
  double hi = shape;
  while (below(hi)) hi *= 2.0;
  while (!below(lo)) {
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) return lo;
  }
  for (int i = 0; i < 200 && hi > lo * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()); ++i) {
    const double mid = std::sqrt(lo * hi);
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

double log_gamma(double x) {
  // lgamma_r: same values as std::lgamma without touching the global signgam.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_gamma_ratio(double a, double h) {
  if (a < 30.0) return log_gamma(a + h) - log_gamma(a);
  // Stirling: the leading terms are regrouped around log1p(h/a) so that the
  // large, nearly equal log Gamma values never get subtracted.
  auto tail = [](double x) {
    const double r = 1.0 / (x * x);
    return (1.0 / 12.0 - r * (1.0 / 360.0 - r * (1.0 / 1260.0 - r / 1680.0))) / x;
  };
  const double b = a + h;
  return (a - 0.5) * std::log1p(h / a) + h * std::log(b) - h + (tail(b) - tail(a));
}

double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double gamma_quantile(double shape, double prob) {
  if (prob <= 0.0) return 0.0;
  if (prob >= 1.0) return std::numeric_limits<double>::infinity();
  return prob <= 0.5 ? gamma_root(shape, prob, false) : gamma_root(shape, 1.0 - prob, true);
}

double gamma_upper_quantile(double shape, double tail) {
  if (tail <= 0.0) return std::numeric_limits<double>::infinity();
  if (tail >= 1.0) return 0.0;
  return tail <= 0.5 ? gamma_root(shape, tail, true) : gamma_root(shape, 1.0 - tail, false);
}

double beta_inc(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace mvt::special
