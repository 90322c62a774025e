#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "helpers.hpp"
#include "mvt/distribution.hpp"
#include "mvt/error.hpp"
#include "mvt/quadrature.hpp"
#include "mvt/special.hpp"
#include "mvt/verification.hpp"

using namespace mvt;

namespace {

MVTParams univariate(double nu) { return MVTParams({0.0}, Matrix{{1.0}}, nu); }
MVTParams worked_2d() { return MVTParams({0.0, 0.0}, Matrix{{2, 1}, {1, 3}}, 5.0); }

// Log-spaced breakpoints on [-r, r] with a cluster at the origin.
std::vector<double> symmetric_breaks(double r) {
  std::vector<double> pos;
  for (double b = 0.5; b < r; b *= 4.0) pos.push_back(b);
  pos.push_back(r);
  std::vector<double> out;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back(-*it);
  out.push_back(0.0);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

}  // namespace

TEST_CASE("log_pdf closed-form centres") {
  const double pi = std::numbers::pi;
  CHECK(log_pdf(univariate(1.0), Vector{0.0}) == doctest::Approx(std::log(1.0 / pi)).epsilon(1e-15));
  CHECK(log_pdf(univariate(2.0), Vector{0.0}) ==
        doctest::Approx(std::log(1.0 / (2.0 * std::sqrt(2.0)))).epsilon(1e-15));
  for (double nu : {0.5, 1.0, 3.0, 30.0, 1e4}) {
    const MVTParams p({0.0, 0.0}, Matrix::identity(2), nu);
    CAPTURE(nu);
    CHECK(log_pdf(p, Vector{0.0, 0.0}) == doctest::Approx(std::log(1.0 / (2.0 * pi))).epsilon(1e-13));
  }
}

TEST_CASE("log_pdf against 50-digit references") {
  CHECK(std::abs(log_pdf(worked_2d(), Vector{1.0, 1.0}) - (-3.0392464212009067824)) < 1e-14);
  const MVTParams p3({0.5, -1, 2}, Matrix{{2, 0.3, -0.2}, {0.3, 1.5, 0.4}, {-0.2, 0.4, 1}}, 3.7);
  CHECK(std::abs(log_pdf(p3, Vector{1.25, 0.5, -0.75}) - (-8.0397747715316054481)) < 1e-13);
}

TEST_CASE("pdf is exp(log_pdf) and underflows to zero") {
  CHECK(pdf(univariate(1.0), Vector{0.0}) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(pdf(worked_2d(), Vector{1.0, 1.0}) == doctest::Approx(std::exp(-3.0392464212009067824)).epsilon(1e-14));
  const MVTParams sharp({0.0}, Matrix{{1.0}}, 1e6);
  CHECK(pdf(sharp, Vector{1e3}) == 0.0);
  CHECK(std::isfinite(log_pdf(sharp, Vector{1e3})));
}

TEST_CASE("construction and evaluation errors") {
  CHECK_THROWS_AS(MVTParams({0.0}, Matrix{{1.0}}, 0.0), Error);
  CHECK_THROWS_AS(MVTParams({0.0}, Matrix{{1.0}}, INFINITY), Error);
  CHECK_THROWS_AS(MVTParams({0.0, 1.0}, Matrix{{1.0}}, 2.0), Error);
  CHECK_THROWS_AS(MVTParams({}, Matrix(0), 2.0), Error);
  try {
    log_pdf(worked_2d(), Vector{1.0});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("scaled chi-square log density") {
  const ScaledChiSquare exp1(2, 2);
  CHECK(scaled_chisq_log_pdf(exp1, 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(scaled_chisq_log_pdf(exp1, 0.0), Error);
  CHECK_THROWS_AS(scaled_chisq_log_pdf(exp1, -1.0), Error);
  CHECK(scaled_chisq_log_pdf(ScaledChiSquare(2, 1), 0.5) ==
        doctest::Approx(std::log(0.5 * std::exp(-0.25))).epsilon(1e-15));

  const ScaledChiSquare s(6, 7);
  CHECK(std::abs(scaled_chisq_log_pdf(s, 1.0) - (-0.43485827507384132235)) < 1e-14);
  // Unit mass of the normalized form.
  const double mass =
      quadrature::integrate([&](double w) { return w > 0 ? std::exp(scaled_chisq_log_pdf(s, w)) : 0.0; },
                            std::vector<double>{1e-300, 1.0, 4.0, 20.0, 200.0})
          .value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(ScaledChiSquare(0, 1), Error);
  CHECK_THROWS_AS(ScaledChiSquare(1, -1), Error);
}

TEST_CASE("scaled chi-square sampling: determinism, mean and KS") {
  const ScaledChiSquare s(5, 5);
  RngStream a(11), b(11);
  CHECK(sample_scaled_chisq(s, a) == sample_scaled_chisq(s, b));

  const std::size_t n = 1'000'000;
  RngStream rng(2024);
  std::vector<double> draws(n);
  double sum = 0.0;
  for (auto& w : draws) {
    w = sample_scaled_chisq(s, rng);
    sum += w;
  }
  CHECK(*std::min_element(draws.begin(), draws.end()) > 0.0);
  CHECK(std::abs(sum / n - 1.0) < 4.0 * std::sqrt(s.variance() / n));
  const auto report = verify::ks_statistic(draws, [&](double w) { return scaled_chisq_cdf(s, w); });
  CHECK(report.threshold == doctest::Approx(1.63 / 1000.0));
  CHECK(report.pass);
}

TEST_CASE("gamma sampling is valid for non-integer shapes below one") {
  for (double shape : {0.1, 0.35, 0.5, 2.7}) {
    RngStream rng(static_cast<std::uint64_t>(shape * 1000));
    std::vector<double> draws(200'000);
    for (auto& g : draws) g = sample_gamma(shape, rng);
    CAPTURE(shape);
    CHECK(verify::ks_statistic(draws, [&](double x) { return special::gamma_p(shape, x); }).pass);
  }
}

TEST_CASE("sample: empty, deterministic, affine consistent") {
  RngStream rng(1);
  CHECK(sample(worked_2d(), 0, rng).empty());

  RngStream a(99), b(99);
  CHECK(sample(worked_2d(), 3, a) == sample(worked_2d(), 3, b));

  // mu + L y where y is the draw of the standard law on the same stream.
  const MVTParams law({1.5, -2.0, 0.25}, Matrix{{2, 0.3, -0.2}, {0.3, 1.5, 0.4}, {-0.2, 0.4, 1}}, 4.5);
  const MVTParams standard({0, 0, 0}, Matrix::identity(3), 4.5);
  RngStream r1(7), r2(7);
  for (int i = 0; i < 100; ++i) {
    const Vector x = sample_one(law, r1);
    Vector y = linalg::lower_multiply(law.factor(), sample_one(standard, r2));
    for (std::size_t k = 0; k < 3; ++k) y[k] += law.mu()[k];
    CHECK(x == y);
  }
}

TEST_CASE("sample variance matches nu/(nu-2)") {
  const MVTParams p({0, 0}, Matrix::identity(2), 10.0);
  RngStream rng(31337);
  const std::size_t n = 1'000'000;
  double s[2] = {0, 0}, ss[2] = {0, 0}, s4[2] = {0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const Vector x = sample_one(p, rng);
    for (int k = 0; k < 2; ++k) {
      s[k] += x[k];
      ss[k] += x[k] * x[k];
      s4[k] += x[k] * x[k] * x[k] * x[k];
    }
  }
  for (int k = 0; k < 2; ++k) {
    const double var = ss[k] / n - (s[k] / n) * (s[k] / n);
    // Standard error of the second moment from the sample fourth moment.
    const double se = std::sqrt((s4[k] / n - (ss[k] / n) * (ss[k] / n)) / n);
    CHECK(std::abs(var - 1.25) < 4.0 * se);
  }
}

TEST_CASE("t3 draws fit the incomplete-beta CDF") {
  RngStream rng(3);
  std::vector<double> draws(1'000'000);
  for (auto& x : draws) x = sample_one(univariate(3.0), rng)[0];
  CHECK(verify::ks_statistic(draws, [](double x) { return verify::student_t_cdf(x, 3.0); }).pass);
}

TEST_CASE("density normalizes in one dimension") {
  for (double nu : {1.0, 3.0, 5.0}) {
    const MVTParams p = univariate(nu);
    // P(|T| > r) <= 2 c nu^{(nu+1)/2} r^{-nu} / nu, c the density constant.
    const double log_c = special::log_gamma(0.5 * (nu + 1)) - special::log_gamma(0.5 * nu) -
                         0.5 * std::log(nu * std::numbers::pi);
    const double r = std::exp((std::log(2.0 / nu) + log_c + 0.5 * (nu + 1) * std::log(nu) - std::log(1e-9)) / nu);
    const auto breaks = symmetric_breaks(r);
    const double mass =
        quadrature::integrate([&](double x) { return pdf(p, Vector{x}); }, breaks, {1e-11, 1e-13, 100'000}).value;
    CAPTURE(nu);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
}

TEST_CASE("density normalizes in two dimensions") {
  for (double nu : {3.0, 5.0}) {
    const MVTParams p({0.5, -0.5}, Matrix{{2, 0.5}, {0.5, 1}}, nu);
    // d/2 ~ F(2, nu): P(d > rho^2) = (1 + rho^2/nu)^{-nu/2}.
    const double rho = std::sqrt(nu * (std::pow(1e-9, -2.0 / nu) - 1.0));
    const double r = rho * std::sqrt(2.0) + 1.0;
    const auto breaks = symmetric_breaks(r);
    auto inner = [&](double x) {
      return quadrature::integrate([&](double y) { return pdf(p, Vector{x + 0.5, y - 0.5}); }, breaks,
                                   {1e-12, 1e-16, 100'000})
          .value;
    };
    const double mass = quadrature::integrate(inner, breaks, {1e-10, 1e-13, 100'000}).value;
    CAPTURE(nu);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
}

TEST_CASE("property: symmetry, radial decay and heavy tails") {
  RngStream rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 5);
    const Matrix sigma = test::random_spd(p, 0.5, rng);
    // Dyadic mu and v keep mu +- v exact.
    Vector mu(p), v(p);
    for (std::size_t i = 0; i < p; ++i) {
      mu[i] = std::round(rng.normal() * 64.0) / 64.0;
      v[i] = std::round(rng.normal() * 64.0) / 64.0;
    }
    const double nu = 0.5 + 10.0 * rng.uniform();
    const MVTParams law(mu, sigma, nu);
    Vector plus(p), minus(p);
    for (std::size_t i = 0; i < p; ++i) {
      plus[i] = mu[i] + v[i];
      minus[i] = mu[i] - v[i];
    }
    CHECK(log_pdf(law, plus) == log_pdf(law, minus));

    double prev = log_pdf(law, mu);
    for (double t = 0.25; t < 100.0; t *= 1.5) {
      Vector x(p);
      for (std::size_t i = 0; i < p; ++i) x[i] = mu[i] + t * (v[i] + 1.0 / 128.0);
      const double cur = log_pdf(law, x);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  // Mahalanobis radius 10.
  const Matrix sigma{{2, 1}, {1, 3}};
  const Vector far{10.0 * std::sqrt(2.0), 5.0 * std::sqrt(2.0)};
  CHECK(linalg::mahalanobis_sq(far, Vector{0, 0}, linalg::cholesky(sigma)) == doctest::Approx(100.0));
  CHECK(pdf(MVTParams({0, 0}, sigma, 1.0), far) > pdf(MVTParams({0, 0}, sigma, 30.0), far));
}
