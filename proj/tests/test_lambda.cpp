// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "jumpform/lambda.hpp"
#include "jumpform/rng.hpp"

using namespace jumpform;

namespace {
AngularPoint ang(double s) { return AngularPoint{s, 1.0 - s, 1.0 + s}; }
}  // namespace

TEST_CASE("limit kernel pointwise properties") {
  SUBCASE("delta = 0 vanishes identically") {
    Philox4x32 rng(7, 0);
    for (int i = 0; i < 200; ++i) {
      double r = 5.0 * rng.uniform();
      double s = rng.uniform();
      CHECK(jq_tilde(0.0, r, ang(s), -0.5) == 0.0);
    }
  }
  SUBCASE("s = 0 mirrors coincide") {
    for (double r : {0.2, 0.7, 1.0, 3.0}) {
      double delta = 0.07, q = -0.4;
      double w = 1.0 + r * r;
      double expect = 2.0 * (std::pow(w, -delta) - 1.0) * (1.0 + std::pow(w, q));
      CHECK(jq_tilde(delta, r, ang(0.0), q) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  SUBCASE("singular point signals") {
    CHECK_THROWS_AS(jq_tilde(0.1, 1.0, AngularPoint{1.0, 0.0, 2.0}, -0.5),
                    std::domain_error);
  }
  SUBCASE("finite-x kernel approaches the limit kernel") {
    Philox4x32 rng(8, 0);
    for (int i = 0; i < 50; ++i) {
      double r = 0.1 + 4.0 * rng.uniform();
      double s = 0.98 * rng.uniform();
      double a = jq(0.15, 1e6, r, ang(s), -0.5);
      double b = jq_tilde(0.15, r, ang(s), -0.5);
      CHECK(std::abs(a - b) <= 1e-4 * (1.0 + std::abs(b)));
    }
  }
  SUBCASE("bound templates: O(1) for r >= 2 and O(r^2) near zero") {
    double worst_far = 0.0, worst_near = 0.0;
    Philox4x32 rng(9, 0);
    for (int i = 0; i < 4000; ++i) {
      double s = rng.uniform();
      double rf = 2.0 + 60.0 * rng.uniform();
      worst_far = std::max(worst_far, std::abs(jq_tilde(0.2, rf, ang(s), -0.5)));
      double rn = 0.5 * rng.uniform();
      if (rn > 1e-8)
        worst_near =
            std::max(worst_near, std::abs(jq_tilde(0.2, rn, ang(s), -0.5)) / (rn * rn));
    }
    CHECK(worst_far <= 4.0);    // |J| <= 2 c1 with c1 <= 2 here
    CHECK(worst_near <= 20.0);  // envelope constant c6 finite
  }
}

TEST_CASE("lambda functional basics") {
  LambdaParams lp{-0.5, 2, 1.0};
  CHECK(lambda_functional(0.0, lp).value == 0.0);
  CHECK(delta_max(-0.5, 2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(lambda_functional(0.3, lp), std::invalid_argument);  // >= delta_0
  CHECK_THROWS_AS(delta_max(-1.2, 2), std::invalid_argument);          // q <= -d/2
  CHECK(in_validated_regime(lp));
  CHECK_FALSE(in_validated_regime(LambdaParams{0.2, 1, 1.2}));
}

TEST_CASE("critical cancellation at q = (alpha-d)/2") {
  for (auto [d, alpha] : std::vector<std::pair<int, double>>{{2, 1.0}, {1, 0.5}}) {
    LambdaParams lp{critical_q(d, alpha), d, alpha};
    QuadResult lp0 = lambda_derivative(0.0, lp, 1e-8);
    CHECK(std::abs(lp0.value) <= 1e-6);
  }
}

TEST_CASE("derivative is negative at zero above the critical index") {
  for (auto [d, alpha] : std::vector<std::pair<int, double>>{{2, 1.0}, {3, 1.5}}) {
    LambdaParams lp{critical_q(d, alpha) + 0.1, d, alpha};
    CHECK(lambda_derivative(0.0, lp, 1e-8).value < -1e-3);
  }
}

TEST_CASE("small-delta negativity above the critical index drives transience") {
  // For q slightly above critical the functional dips negative on a small
  // delta interval before turning positive: the Lyapunov certificate lives
  // there.
  LambdaParams lp{0.2, 1, 1.2};  // critical q is 0.1
  CHECK(lambda_functional(0.05, lp, 1e-9).value < -0.01);
  CHECK(lambda_functional(0.3, lp, 1e-9).value > 0.0);
}

TEST_CASE("limit functional is nonnegative at the critical index") {
  // At q = (alpha-d)/2 the derivative vanishes at zero and increases in
  // delta, so the functional is nonnegative on (0, delta_0); confirmed by
  // high-precision independent quadrature of the defining integral.
  LambdaParams lp{-0.5, 2, 1.0};
  QuadResult v = lambda_functional(0.1, lp, 1e-9);
  CHECK(v.value == doctest::Approx(0.359342427396).epsilon(1e-6));
  CHECK(v.value > 0.0);
}

TEST_CASE("derivative chain: finite differences and fundamental theorem") {
  LambdaParams lp{-0.75, 3, 1.5};
  SUBCASE("finite difference at delta = 0.1") {
    const double h = 1e-4;
    double fd = (lambda_functional(0.1 + h, lp, 1e-11).value -
                 lambda_functional(0.1 - h, lp, 1e-11).value) /
                (2.0 * h);
    CHECK(lambda_derivative(0.1, lp, 1e-10).value == doctest::Approx(fd).epsilon(1e-5));
  }
  SUBCASE("integral of the derivative reproduces the functional") {
    // 8-point Gauss-Legendre on [0, 0.1]
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double a = 0.0, b = 0.1, c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
      acc += gw[i] * lambda_derivative(c - hw * gx[i], lp, 1e-10).value;
      acc += gw[i] * lambda_derivative(c + hw * gx[i], lp, 1e-10).value;
    }
    acc *= hw;
    CHECK(lambda_functional(0.1, lp, 1e-10).value == doctest::Approx(acc).epsilon(1e-4));
  }
}

TEST_CASE("derivative is nondecreasing in delta") {
  // The symmetrized log kernel is pointwise decreasing in delta (its
  // delta-derivative carries -(log w)^2), so the derivative of the limit
  // functional is nondecreasing.
  LambdaParams lp{-0.5, 2, 1.0};
  double prev = -1e300;
  for (double delta : {0.0, 0.06, 0.12, 0.18}) {
    double v = lambda_derivative(delta, lp, 1e-9).value;
    CHECK(v >= prev - 1e-8);
    prev = v;
  }
}

TEST_CASE("log-moment integrals triple agreement at (2,1)") {
  double closed = i1_closed(2, 1.0);
  SeriesValue series = i1_series(2, 1.0);
  QuadResult quad = i1_quad(2, 1.0, 1e-9);
  CHECK(closed == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  CHECK(series.value == doctest::Approx(closed).epsilon(1e-9));
  CHECK(quad.value == doctest::Approx(closed).epsilon(1e-8));
  QuadResult i2 = i2_quad(-0.5, 2, 1.0, 1e-9);
  CHECK(i2.value == doctest::Approx(-2.0 * M_PI).epsilon(1e-7));
  CHECK(i2_series_critical(2, 1.0) == doctest::Approx(i2.value).epsilon(1e-7));
}

TEST_CASE("suite assembly and export") {
  LambdaParams lp{-0.5, 2, 1.0};
  LambdaResult r = evaluate_lambda_suite(lp, 0.1, 1e-8);
  CHECK_FALSE(r.outside_validated_regime);
  CHECK(std::abs(r.lambda_prime_at_zero) <= 1e-6);
  CHECK(std::abs(r.I1_quad + r.I2_quad) <= 1e-5 * std::abs(r.I1_quad));
  CHECK(r.to_json().find("lambda_prime_at_zero") != std::string::npos);
  CHECK(r.to_csv_row().find(",") != std::string::npos);
}
