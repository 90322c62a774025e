#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "mvt/conditioning.hpp"
#include "mvt/error.hpp"
#include "mvt/quadrature.hpp"
#include "mvt/special.hpp"
#include "mvt/suites.hpp"
#include "mvt/verification.hpp"

using namespace mvt;
using namespace mvt::verify;

namespace {

MVTParams worked() { return MVTParams({0.0, 0.0}, Matrix{{2, 1}, {1, 3}}, 5.0); }

}  // namespace

TEST_CASE("student t CDF closed forms") {
  for (double nu : {0.3, 1.0, 4.0, 100.0}) CHECK(student_t_cdf(0.0, nu) == 0.5);
  CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
  const double x = std::sqrt(2.0);
  CHECK(student_t_cdf(x, 2.0) == doctest::Approx(0.5 + x / (2.0 * std::sqrt(2.0 + x * x))).epsilon(1e-14));
  CHECK(student_t_cdf(-x, 2.0) == doctest::Approx(1.0 - 0.853553390593273762).epsilon(1e-13));
  CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), Error);
  CHECK_THROWS_AS(student_t_cdf(1.0, -2.0), Error);
}

TEST_CASE("student t CDF against 50-digit references") {
  CHECK(student_t_cdf(1.3, 5) == doctest::Approx(0.87484968291466138803).epsilon(1e-13));
  CHECK(student_t_cdf(-2.5, 3) == doctest::Approx(0.043853323504032773625).epsilon(1e-12));
  CHECK(student_t_cdf(4, 0.5) == doctest::Approx(0.84038995850566423476).epsilon(1e-13));
  CHECK(student_t_cdf(0.2, 30) == doctest::Approx(0.57858492147033767653).epsilon(1e-13));
  CHECK(student_t_cdf(7, 2.5) == doctest::Approx(0.994713815236204295).epsilon(1e-13));
}

TEST_CASE("student t CDF matches integration of the density") {
  for (double nu : {1.0, 2.0, 5.0}) {
    const MVTParams law({0.0}, Matrix{{1.0}}, nu);
    double prev = 0.0;
    for (double x = -10.0; x <= 10.0; x += 0.25) {
      const double integral =
          x == 0.0 ? 0.0
                   : quadrature::integrate([&](double t) { return pdf(law, Vector{t}); }, std::min(0.0, x),
                                           std::max(0.0, x), {1e-13, 1e-15, 10'000})
                         .value;
      const double numeric = 0.5 + (x < 0 ? -integral : integral);
      const double cdf = student_t_cdf(x, nu);
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::abs(cdf - numeric) < 1e-8);
      CHECK(cdf >= prev);
      prev = cdf;
    }
  }
}

TEST_CASE("KS statistic constructions") {
  auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const double one[] = {0.5};
  const GofReport single = ks_statistic(one, uniform_cdf);
  CHECK(single.statistic == 0.5);
  CHECK(single.n == 1);

  const std::size_t n = 1000;
  std::vector<double> quantiles(n);
  for (std::size_t i = 0; i < n; ++i) quantiles[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const GofReport exact = ks_statistic(quantiles, uniform_cdf);
  CHECK(exact.statistic == doctest::Approx(1.0 / (2.0 * n)).epsilon(1e-12));
  CHECK(exact.threshold == doctest::Approx(1.63 / std::sqrt(1000.0)));
  CHECK(exact.pass);

  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, uniform_cdf), Error);
}

TEST_CASE("KS statistic is shift and scale equivariant") {
  RngStream rng(3);
  std::vector<double> base(500), moved(500);
  for (std::size_t i = 0; i < base.size(); ++i) {
    // Dyadic samples so 4x + 3 and its inverse are exact.
    base[i] = std::round(rng.normal() * 1024.0) / 1024.0;
    moved[i] = 4.0 * base[i] + 3.0;
  }
  auto cdf = [](double x) { return student_t_cdf(x, 3.0); };
  const GofReport a = ks_statistic(base, cdf);
  const GofReport b = ks_statistic(moved, [&](double y) { return cdf((y - 3.0) / 4.0); });
  CHECK(a.statistic == b.statistic);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1, 2, 3, 4};
  CHECK(ks_two_sample(a, a).statistic == 0.0);
  const std::vector<double> b{5, 6, 7, 8};
  CHECK(ks_two_sample(a, b).statistic == 1.0);
  CHECK(ks_two_sample(a, b).threshold == doctest::Approx(1.63 * std::sqrt(2.0 / 4.0)));
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), Error);
}

TEST_CASE("quadrature oracle matches the worked conditional") {
  const Partition part = Partition::observe({0}, 2);
  const double centre = conditional_pdf_quadrature(worked(), part, Vector{2.0}, Vector{1.0});
  CHECK(centre == doctest::Approx(std::exp(-1.4956389616023053568)).epsilon(1e-8));
  const double off = conditional_pdf_quadrature(worked(), part, Vector{2.0}, Vector{0.0});
  CHECK(off == doctest::Approx(std::exp(-1.6901334406441430331)).epsilon(1e-8));
}

TEST_CASE("quadrature oracle agrees with the closed-form conditional on random instances") {
  RngStream rng(101);
  const double nus[] = {0.5, 1, 2, 5, 30};
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 2 + static_cast<std::size_t>(trial % 3);
    const MVTParams law = random_law(p, nus[trial % 5], rng);
    const Partition part = random_partition(p, rng);
    const Vector x = sample_one(law, rng);
    const Vector x1 = linalg::gather(x, part.block1());
    const Vector x2 = linalg::gather(x, part.block2());
    const double exact = pdf(condition(law, part, x1).law, x2);
    const double numeric = conditional_pdf_quadrature(law, part, x1, x2);
    CHECK(std::abs(numeric - exact) / exact < 1e-6);
  }
}

TEST_CASE("quadrature oracle stays accurate when the integrand sits deep in a posterior tail") {
  // Light tails and a free value far from the conditional location: nearly
  // all of the integrand lies below the default lower truncation quantile.
  const MVTParams law({0, 0, 0}, Matrix{{1, 0.3, 0}, {0.3, 1, 0.2}, {0, 0.2, 1}}, 30.0);
  const Partition part = Partition::observe({0}, 3);
  for (double far : {6.0, 12.0, 25.0}) {
    CAPTURE(far);
    const Vector x1{0.1};
    const Vector x2{far, -far};
    const double exact = pdf(condition(law, part, x1).law, x2);
    CHECK(std::abs(conditional_pdf_quadrature(law, part, x1, x2) - exact) / exact < 1e-8);
  }
}

TEST_CASE("halving the truncation mass moves the oracle by less than rel_tol") {
  const MVTParams law({0.5, -1, 2}, Matrix{{2, 0.3, -0.2}, {0.3, 1.5, 0.4}, {-0.2, 0.4, 1}}, 0.5);
  const Partition part = Partition::observe({2}, 3);
  QuadratureSpec spec;
  const double a = conditional_pdf_quadrature(law, part, Vector{3.0}, Vector{0.1, -2.0}, spec);
  spec.truncation_mass *= 0.5;
  const double b = conditional_pdf_quadrature(law, part, Vector{3.0}, Vector{0.1, -2.0}, spec);
  CHECK(std::abs(a - b) / a < spec.rel_tol);
}

TEST_CASE("quadrature oracle in the normal limit") {
  const MVTParams law({1, -1, 0}, Matrix{{2, 0, 0}, {0, 1, 0.4}, {0, 0.4, 1.5}}, 1e6);
  const Partition part = Partition::observe({0}, 3);
  const Vector x2{-0.5, 0.8};
  const double numeric = conditional_pdf_quadrature(law, part, Vector{2.0}, x2);
  // Gaussian N(mu2, S22) because the blocks are uncorrelated.
  const double det = 1.0 * 1.5 - 0.16;
  const double r0 = x2[0] + 1.0, r1 = x2[1];
  const double quad = (1.5 * r0 * r0 - 2 * 0.4 * r0 * r1 + 1.0 * r1 * r1) / det;
  const double gaussian = std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
  CHECK(std::abs(numeric - gaussian) / gaussian < 1e-4);
}

TEST_CASE("gamma-mixture quadrature reproduces the joint density") {
  RngStream rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t p = 1 + static_cast<std::size_t>(trial % 4);
    const MVTParams law = random_law(p, 0.5 + 20.0 * rng.uniform(), rng);
    const Vector x = sample_one(law, rng);
    CHECK(mixture_pdf_quadrature(law, x) == doctest::Approx(pdf(law, x)).epsilon(1e-7));
  }
}

TEST_CASE("independence check") {
  RngStream rng(1);
  const MVTParams block({0, 0, 0}, Matrix{{2, 0, 0}, {0, 1, 0.3}, {0, 0.3, 1}}, 6.0);
  CHECK(independence_check(block, Partition::observe({0}, 3), 50'000, rng).pass());

  RngStream rng2(2);
  const IndependenceReport ok = independence_check(worked(), Partition::observe({0}, 2), 200'000, rng2);
  CHECK(ok.correlation.threshold == doctest::Approx(4.0 / std::sqrt(200'000.0)));
  CHECK(ok.split_ks.threshold == doctest::Approx(1.63 * std::sqrt(2.0 / 100'000.0)));
  CHECK(ok.pass());

  RngStream rng3(3);
  const MVTParams nu3({0, 0}, Matrix{{2, 1}, {1, 3}}, 3.0);
  const IndependenceReport bad =
      independence_check(nu3, Partition::observe({0}, 2), 200'000, rng3, ResidualKind::Unscaled);
  CHECK_FALSE(bad.split_ks.pass);

  RngStream rng4(4);
  CHECK_THROWS_AS(independence_check(worked(), Partition::observe({0}, 2), 100, rng4), Error);
}

TEST_CASE("moment suite") {
  RngStream rng(5);
  const MomentReport m = moment_suite(worked(), Partition::observe({0}, 2), 200'000, rng);
  CHECK(m.expected_d1 == doctest::Approx(5.0 / 3.0));
  CHECK(m.pass());
  CHECK(m.mean_inflation > 1.0);

  const MVTParams nu10({0, 0, 0}, Matrix{{1, 0.2, 0.1}, {0.2, 2, 0}, {0.1, 0, 1}}, 10.0);
  const MomentReport m10 = moment_suite(nu10, Partition::observe({0, 1}, 3), 200'000, rng);
  CHECK(m10.expected_d1 == doctest::Approx(2.5));
  CHECK(m10.pass());

  const MVTParams nu2({0, 0}, Matrix::identity(2), 2.0);
  try {
    moment_suite(nu2, Partition::observe({0}, 2), 200'000, rng);
    FAIL("expected DofTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DofTooSmall);
  }
}
