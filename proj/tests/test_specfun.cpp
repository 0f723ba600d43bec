// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "jumpform/quad.hpp"
#include "jumpform/rng.hpp"
#include "jumpform/specfun.hpp"

using namespace jumpform;
namespace jf = jumpform;

TEST_CASE("gamma values and poles") {
  CHECK(jf::gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(jf::gamma(1.0) == doctest::Approx(1.0));
  CHECK(jf::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK_THROWS_AS(jf::gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(jf::gamma(-3.0), std::domain_error);
  // reflection identity Gamma(x) Gamma(1-x) = pi/sin(pi x)
  for (double x : {0.1, 0.33, 0.71, 0.9}) {
    CHECK(jf::gamma(x) * jf::gamma(1.0 - x) ==
          doctest::Approx(M_PI / std::sin(M_PI * x)).epsilon(1e-13));
  }
}

TEST_CASE("digamma recurrence, reflection, spec value") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
  // psi(x+3) - psi(x) at x = 1 equals 1 + 1/2 + 1/3
  CHECK(digamma(4.0) - digamma(1.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  Philox4x32 rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    double x = 0.05 + 8.0 * rng.uniform();
    CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-12));
    CHECK(digamma(1.0 - x) - digamma(x) ==
          doctest::Approx(M_PI / std::tan(M_PI * x)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(digamma(-2.0), std::domain_error);
}

TEST_CASE("beta gamma form equals integral form") {
  // fold the integral so both endpoint singularities sit at zero, where the
  // substituted offsets stay exact in floating point
  Philox4x32 rng(11, 0);
  for (int i = 0; i < 25; ++i) {
    double x = 0.1 + 4.9 * rng.uniform();
    double y = 0.1 + 4.9 * rng.uniform();
    auto half = [](double a, double b) {
      return [a, b](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
    };
    QuadOptions o;
    o.abs_tol = 1e-13;
    o.singular.push_back({0.0, x - 1.0});
    QuadResult q1 = integrate(half(x, y), 0.0, 0.5, o);
    QuadOptions o2;
    o2.abs_tol = 1e-13;
    o2.singular.push_back({0.0, y - 1.0});
    QuadResult q2 = integrate(half(y, x), 0.0, 0.5, o2);
    CHECK(jf::beta(x, y) == doctest::Approx(q1.value + q2.value).epsilon(1e-9));
  }
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(0.37, 0) == 1.0);
  CHECK(pochhammer(-2.0, 4) == 0.0);  // crosses zero
  CHECK(pochhammer(1.5, 3) == doctest::Approx(1.5 * 2.5 * 3.5));
  // Gamma-ratio route for large n
  CHECK(pochhammer(0.25, 100) ==
        doctest::Approx(jf::gamma(100.25) / jf::gamma(0.25)).epsilon(1e-11));
}

TEST_CASE("gauss hypergeometric sum equals the Gamma closed form") {
  SUBCASE("d=2 alpha=1 equals 2/pi") {
    SeriesValue s = gauss_sum(2, 1.0);
    CHECK(s.converged);
    CHECK(s.value == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
  }
  SUBCASE("alpha near zero: all n>=1 terms vanish") {
    SeriesValue s = gauss_sum(3, 1e-8);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("d=3 alpha=1.5 against independent Gamma evaluation") {
    SeriesValue s = gauss_sum(3, 1.5);
    double closed = jf::gamma(1.5) * jf::gamma(1.5) / (jf::gamma(2.25) * jf::gamma(0.75));
    CHECK(s.value == doctest::Approx(closed).epsilon(1e-11));
  }
  SUBCASE("grid") {
    for (int d : {1, 2, 3, 4})
      for (double a : {0.3, 0.9, 1.0, 1.5, 1.9}) {
        SeriesValue s = gauss_sum(d, a);
        CHECK(std::abs(s.value - gauss_sum_closed(d, a)) <= 1e-10);
      }
  }
}

TEST_CASE("digamma-weighted and zero sums") {
  SUBCASE("d=2 alpha=1 weighted sum equals 4 sqrt(pi)") {
    DigammaWeightedSums s = digamma_weighted_sum(2, 1.0);
    CHECK(s.weighted.value == doctest::Approx(4.0 * std::sqrt(M_PI)).epsilon(1e-11));
    CHECK(std::abs(s.unweighted.value) <= 1e-11);
  }
  SUBCASE("grid against closed form") {
    for (int d : {1, 2, 3, 4})
      for (double a : {0.3, 0.9, 1.0, 1.5, 1.9}) {
        DigammaWeightedSums s = digamma_weighted_sum(d, a);
        CHECK(std::abs(s.weighted.value - digamma_weighted_closed(d, a)) <= 1e-9);
        CHECK(std::abs(s.unweighted.value) <= 1e-9);
      }
  }
}

TEST_CASE("series value stabilizes within tail_bound when terms double") {
  // zeta(3/2)-type tail, the slowest family the tail fit faces
  std::vector<double> terms;
  for (int n = 1; n <= 24000; ++n) terms.push_back(std::pow(n, -1.5));
  SeriesValue full = tail_fit_sum(terms, 1.5, false);
  std::vector<double> half(terms.begin(), terms.begin() + 12000);
  SeriesValue coarse = tail_fit_sum(half, 1.5, false);
  CHECK(std::abs(full.value - coarse.value) <= full.tail_bound + coarse.tail_bound);
  CHECK(full.value == doctest::Approx(2.6123753486854883).epsilon(1e-10));  // zeta(3/2)
}

TEST_CASE("levin acceleration on a known slow series") {
  std::vector<double> terms;
  for (int n = 1; n <= 60; ++n) terms.push_back(1.0 / (static_cast<double>(n) * n));
  SeriesValue s = accelerated_sum(terms);
  CHECK(std::abs(s.value - M_PI * M_PI / 6.0) <= 10.0 * s.tail_bound + 1e-10);
}

TEST_CASE("partial binomial-digamma identity") {
  SUBCASE("n=1 a=-0.75 both sides equal 1") {
    CHECK(partial_binomial_digamma_direct(-0.75, 1) == doctest::Approx(1.0));
    CHECK(partial_binomial_digamma(-0.75, 1) == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("n=2 a=0.3 and a=-0.5 n=5") {
    for (auto [a, n] : std::vector<std::pair<double, int>>{{0.3, 2}, {-0.5, 5}}) {
      double lhs = partial_binomial_digamma_direct(a, n);
      double rhs = partial_binomial_digamma(a, n);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
  SUBCASE("random grid") {
    Philox4x32 rng(5, 0);
    for (int i = 0; i < 60; ++i) {
      double a = -2.0 + 4.0 * rng.uniform();
      if (std::abs(a - std::round(a)) < 0.05) continue;
      int n = 1 + static_cast<int>(rng.uniform() * 12);
      double lhs = partial_binomial_digamma_direct(a, n);
      double rhs = partial_binomial_digamma(a, n);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
    }
  }
  CHECK_THROWS_AS(partial_binomial_digamma(2.0, 3), std::invalid_argument);
}

TEST_CASE("identity suite stays below 1e-8 on the full grid") {
  auto rows = run_identity_suite({1, 2, 3, 4}, {0.3, 0.9, 1.0, 1.5, 1.9});
  for (const auto& r : rows) {
    INFO(r.name << " " << r.params);
    CHECK(r.abs_err <= 1e-8);
  }
}
