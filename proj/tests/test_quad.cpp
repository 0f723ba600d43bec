// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "jumpform/lambda.hpp"
#include "jumpform/model.hpp"
#include "jumpform/quad.hpp"
#include "jumpform/specfun.hpp"

using namespace jumpform;
namespace jf = jumpform;

TEST_CASE("radial log integral equals pi at alpha=1") {
  auto f = [](double r) { return std::log1p(r * r); };
  QuadResult q = integrate_radial(f, 0.0, INFINITY, 2.0, 1e-10);
  CHECK(q.converged);
  CHECK(q.value == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(q.abs_error_estimate >= std::abs(q.value - M_PI) / 10.0);
}

TEST_CASE("radial Beta moment equals pi/4 at n=1 alpha=1") {
  auto f = [](double r) { return std::pow(r / (1.0 + r * r), 2.0); };
  QuadResult q = integrate_radial(f, 0.0, INFINITY, 2.0, 1e-10);
  CHECK(q.value == doctest::Approx(M_PI / 4.0).epsilon(1e-10));
}

TEST_CASE("zero integrand") {
  QuadResult q = integrate([](double) { return 0.0; }, 0.0, 1.0, {});
  CHECK(q.value == 0.0);
  CHECK(q.abs_error_estimate == 0.0);
  CHECK(q.converged);
}

TEST_CASE("displayed radial Beta integrals across the parameter grid") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    // int_0^inf log(1+r^2) r^{-1-a} dr = (1/a) B(a/2, 1-a/2)
    {
      auto f = [](double r) { return std::log1p(r * r); };
      QuadResult q = integrate_radial(f, 0.0, INFINITY, 1.0 + alpha, 1e-10);
      double expect = (1.0 / alpha) * jf::beta(alpha / 2.0, 1.0 - alpha / 2.0);
      CHECK(q.value == doctest::Approx(expect).epsilon(1e-6));
    }
    for (int n = 1; n <= 5; ++n) {
      auto f = [n](double r) { return std::pow(r / (1.0 + r * r), 2.0 * n); };
      QuadResult q = integrate_radial(f, 0.0, INFINITY, 1.0 + alpha, 1e-11);
      double expect = 0.5 * jf::beta(n + alpha / 2.0, n - alpha / 2.0);
      CHECK(q.value == doctest::Approx(expect).epsilon(1e-6));
    }
    for (double qq : {-0.75, -0.3}) {
      for (int n = 1; n <= 5; ++n) {
        auto f = [n, qq](double r) {
          return std::pow(1.0 + r * r, qq) * std::pow(r / (1.0 + r * r), 2.0 * n);
        };
        QuadResult q = integrate_radial(f, 0.0, INFINITY, 1.0 + alpha, 1e-11);
        double expect = 0.5 * jf::beta(n - alpha / 2.0, n + alpha / 2.0 - qq);
        CHECK(q.value == doctest::Approx(expect).epsilon(1e-6));
      }
      // digamma-weighted version, valid from n = 0
      for (int n = 0; n <= 5; ++n) {
        auto f = [n, qq](double r) {
          return std::pow(1.0 + r * r, qq) * std::log1p(r * r) *
                 std::pow(r / (1.0 + r * r), 2.0 * n);
        };
        QuadResult q = integrate_radial(f, 0.0, INFINITY, 1.0 + alpha, 1e-11);
        // d/dq of the Beta closed form: the digamma factor carries
        // psi(2n-q) - psi(n+alpha/2-q)
        double expect = 0.5 *
                        (digamma(2.0 * n - qq) - digamma(n + alpha / 2.0 - qq)) *
                        jf::beta(n - alpha / 2.0, n + alpha / 2.0 - qq);
        INFO("alpha=" << alpha << " q=" << qq << " n=" << n);
        CHECK(q.value == doctest::Approx(expect).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("refinement monotonicity") {
  auto f = [](double r) { return std::pow(std::abs(r - 0.3), -0.4) * std::cos(3.0 * r); };
  QuadOptions o1;
  o1.abs_tol = 1e-6;
  o1.singular.push_back({0.3, -0.4});
  QuadResult a = integrate(f, 0.0, 2.0, o1);
  QuadOptions o2 = o1;
  o2.abs_tol = 5e-7;
  QuadResult b = integrate(f, 0.0, 2.0, o2);
  CHECK(std::abs(a.value - b.value) <= a.abs_error_estimate + 1e-12);
}

TEST_CASE("angular moments") {
  // int_0^1 s^2 (1-s^2)^{(d-3)/2} ds at d=3 equals B(3/2,1)/2 = 1/3
  auto h = [](const AngularPoint& ap) { return ap.s * ap.s; };
  QuadResult q3 = integrate_angular(h, 3, 1e-11);
  CHECK(q3.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  QuadResult q2 = integrate_angular_full(h, 2, 1e-11);
  CHECK(q2.value == doctest::Approx(M_PI / 2.0).epsilon(1e-9));  // Chebyshev moment
  // d=1 rules: evaluation at s=1 / two-point sum
  QuadResult q1 = integrate_angular(h, 1, 1e-11);
  CHECK(q1.value == 1.0);
  QuadResult q1f = integrate_angular_full(h, 1, 1e-11);
  CHECK(q1f.value == 2.0);
}

TEST_CASE("rs integral closed-form product") {
  // g == 1, d=3, r_lo=1, alpha=1: (int_0^1 ds) (int_1^inf dr/r^2) = 1
  RsOptions o;
  o.abs_tol = 1e-9;
  QuadResult q = integrate_rs([](double, double, const AngularPoint&) { return 1.0; }, 3,
                              1.0, 1.0, o);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("rs integral of the zero kernel") {
  RsOptions o;
  o.abs_tol = 1e-10;
  auto g = [](double r, double xi, const AngularPoint& ap) {
    return jq_tilde_xi(0.0, r, xi, ap, -0.5);
  };
  QuadResult q = integrate_rs(g, 2, 1.0, 0.0, o);
  CHECK(std::abs(q.value) <= 1e-10);
}

TEST_CASE("compensated small-jump integral") {
  SUBCASE("exact quadratic remainder gives 2 c_star at p=0") {
    // u = |x|^2: the remainder is exactly |z|^2 and the coefficient sum is 2;
    // conventions match the generator (the omega_{d-2} prefactor rides along
    // with the remainder).
    for (int d : {1, 2, 3}) {
      const double alpha = 1.2;
      auto rem = [d](double rho, const AngularPoint&) {
        return 2.0 * rho * rho * angular_prefactor(d);
      };
      QuadResult q = integrate_compensated_smalljump(rem, d, alpha, 1e-11);
      ModelParams m = make_model(d, alpha, alpha, 0.0, 0.0);
      CHECK(q.value == doctest::Approx(2.0 * levy_kernel(m).c_star()).epsilon(1e-9));
    }
  }
  SUBCASE("contract violation is rejected") {
    auto bad = [](double rho, const AngularPoint&) { return rho; };  // O(rho) only
    CHECK_THROWS_AS(integrate_compensated_smalljump(bad, 1, 1.2, 1e-9),
                    std::invalid_argument);
  }
  SUBCASE("tolerance refinement consistency") {
    auto rem = [](double rho, const AngularPoint& ap) {
      return rho * rho * (1.0 + 0.3 * ap.s);
    };
    QuadResult a = integrate_compensated_smalljump(rem, 2, 1.5, 1e-8);
    QuadResult b = integrate_compensated_smalljump(rem, 2, 1.5, 1e-10);
    CHECK(std::abs(a.value - b.value) <= 1e-7);
  }
}

TEST_CASE("wide segments are pre-split so distant mass is not missed") {
  auto f = [](double r) { return std::pow(r, -2.2); };
  QuadOptions o;
  o.abs_tol = 1e-12;
  o.breakpoints = {1e12 - 1.0, 1e12, 1e12 + 1.0};
  o.tail_power = 2.2;
  QuadResult q = integrate(f, 1.0, INFINITY, o);
  CHECK(q.value == doctest::Approx(1.0 / 1.2).epsilon(1e-9));
}
