// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "jumpform/generator.hpp"
#include "jumpform/lambda.hpp"
#include "jumpform/quad.hpp"
#include "jumpform/rng.hpp"
#include "oracles.hpp"

using namespace jumpform;

TEST_CASE("psi derivatives match finite differences") {
  PsiDelta psi(0.35);
  Philox4x32 rng(23, 0);
  const double h = 1e-5;
  for (int i = 0; i < 40; ++i) {
    int d = 1 + static_cast<int>(rng.uniform() * 3);
    std::vector<double> x(d), g(d), e(d);
    for (int k = 0; k < d; ++k) x[k] = 6.0 * (rng.uniform() - 0.5);
    psi.gradient(x, g);
    for (int k = 0; k < d; ++k) {
      std::vector<double> xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      double fd = (psi.value(xp) - psi.value(xm)) / (2.0 * h);
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
    }
    // Hessian quadratic form against second differences along a direction
    std::vector<double> z(d);
    for (int k = 0; k < d; ++k) z[k] = rng.normal();
    std::vector<double> xp = x, xm = x;
    for (int k = 0; k < d; ++k) {
      xp[k] += h * z[k];
      xm[k] -= h * z[k];
    }
    double fd2 = (psi.value(xp) - 2.0 * psi.value(x) + psi.value(xm)) / (h * h);
    CHECK(psi.hessian_quad(x, z) == doctest::Approx(fd2).epsilon(2e-5));
  }
  CHECK(psi.value_t(0.0) == 1.0);
}

TEST_CASE("L1 structure at the origin and for constant a1") {
  ModelParams m = make_model(3, 1.0, 1.0, 0.5, 0.0);
  PsiDelta psi(0.2);
  CHECK(apply_L1_drift(psi, 0.0, m) == 0.0);  // gradient vanishes at x = 0
  ModelParams m0 = make_model(3, 1.0, 1.0, 0.0, 0.0);
  CHECK(apply_L1_drift(psi, 7.3, m0) == 0.0);  // a1 constant
  CHECK(apply_L1(psi, 0.0, m0) ==
        doctest::Approx(apply_L1_compensated(psi, 0.0, m0)).epsilon(1e-9));
  CHECK(apply_L1(psi, 0.0, m0) < 0.0);
}

TEST_CASE("L1 against a Monte Carlo integration oracle") {
  ModelParams m = make_model(1, 1.0, 1.0, 0.5, 0.0);
  PsiDelta psi(0.2);
  double quad_val = apply_L1(psi, 3.0, m, 1e-10);
  auto mc = jumpform_test::mc_small_jump_generator(psi, 3.0, m, 2000000, 99);
  CHECK(std::abs(quad_val - mc.value) <= 3.0 * mc.se);
}

TEST_CASE("L2 basics") {
  ModelParams m = make_model(1, 1.0, 1.0, 0.0, 0.0);
  ConstantFn one(1.0);
  CHECK(apply_L2(one, 5.0, m) == 0.0);
  // d=1, q=0, x=0: 2 int_1^inf (psi(z) - 1) 2 z^{-2} dz
  PsiDelta psi(0.3);
  auto f = [&](double z) { return (psi.value_t(z * z) - 1.0) * 2.0 * std::pow(z, -2.0); };
  QuadOptions o;
  o.abs_tol = 1e-12;
  o.tail_power = 2.0;
  QuadResult oracle = integrate(f, 1.0, INFINITY, o);
  double val = apply_L2(psi, 0.0, m, 1e-11);
  CHECK(val == doctest::Approx(2.0 * oracle.value).epsilon(1e-8));
  CHECK(val < 0.0);
  CHECK_THROWS_AS(apply_L2(psi, 1.0, make_model(1, 1.0, 1.0, 0.0, 0.6), 1e-8),
                  std::invalid_argument);
}

TEST_CASE("L2 equals the polar factorization via the limit-profile module") {
  Philox4x32 rng(31, 0);
  for (int i = 0; i < 8; ++i) {
    int d = 1 + static_cast<int>(rng.uniform() * 3);
    double alpha = 0.5 + 1.2 * rng.uniform();
    double q = -0.4 * d * rng.uniform();
    if (q >= alpha / 2) q = alpha / 2 - 0.1;
    if (q <= -0.5 * d + 0.15) q = -0.5 * d + 0.15;
    double dmax = delta_max(q, d);
    double delta = 0.1 * dmax + 0.7 * dmax * rng.uniform();
    double x = 0.5 + 9.5 * rng.uniform();
    ModelParams m = make_model(d, alpha, alpha, 0.0, q);
    PsiDelta psi(delta);
    double direct = apply_L2(psi, x, m, 1e-10);
    LambdaParams lp{q, d, alpha};
    QuadResult fq = fq_profile(delta, x, lp, 1e-11);
    double factorized = angular_prefactor(d) * psi.value_t(x * x) *
                        std::pow(1.0 + x * x, q - alpha / 2.0) * fq.value;
    INFO("d=" << d << " alpha=" << alpha << " q=" << q << " delta=" << delta << " x=" << x);
    CHECK(direct == doctest::Approx(factorized).epsilon(1e-6));
  }
}

TEST_CASE("drift profile signs and proof-limit constant") {
  ModelParams m = make_model(3, 1.0, 1.0, 0.0, 0.0);
  std::vector<double> radii = default_radii();
  DriftReport rep = drift_profile_L1(m, 0.2, radii, 1e-9);
  CHECK(rep.all_negative_beyond_M);
  CHECK(rep.fitted_M < 1e3);
  CHECK(rep.fitted_C > 0.0);
  // limit constant -(2 delta c_*/d)(d + 2p - 2(delta+1)) = -0.32 pi here
  CHECK(rep.proof_limit_constant == doctest::Approx(-0.32 * M_PI));
  double n_at_1024 = rep.normalized[10];
  CHECK(n_at_1024 == doctest::Approx(rep.proof_limit_constant).epsilon(0.02));

  CHECK_THROWS_AS(drift_profile_L1(make_model(1, 1.0, 1.0, 0.3, 0.0), 0.1, radii),
                  std::invalid_argument);  // p <= (2-d)/2
  CHECK_THROWS_AS(drift_profile_L1(m, 0.9, radii), std::invalid_argument);  // delta range
}

TEST_CASE("transient-side drift negativity for d=1 p=1") {
  ModelParams m = make_model(1, 1.2, 1.2, 1.0, 0.0);
  std::vector<double> radii;
  for (int k = 0; k <= 16; ++k) radii.push_back(std::pow(2.0, k));
  DriftReport rep = drift_profile_L1(m, 0.3, radii, 1e-9);
  CHECK(rep.all_negative_beyond_M);
}

TEST_CASE("decay fit respects the small-jump bound") {
  ModelParams m = make_model(1, 1.0, 1.0, 0.5, 0.0);
  PsiDelta psi(0.3);
  std::vector<double> radii;
  for (int k = 8; k <= 16; k += 2) radii.push_back(std::pow(2.0, k));
  DecayFit fit = decay_check(psi, m, GeneratorPart::L1, radii, 1e-10);
  CHECK(fit.slope <= theoretical_decay_exponent(m, GeneratorPart::L1) + 0.05);
}

TEST_CASE("class A membership probes") {
  PsiDelta psi(0.5);
  ClassACheck a = class_A_check(psi, 3, 256);
  CHECK(a.pass);
  CHECK(a.c1_estimate > 0.0);

  ConstantFn one(1.0);
  ClassACheck b = class_A_check(one, 2, 128);
  CHECK(b.pass);
  CHECK(b.c1_estimate == 0.0);
  CHECK(b.c2_estimate == 0.0);

  // u(x) = x_1: gamma-weighted gradient grows without bound
  struct Linear final : C2Function {
    double value(std::span<const double> x) const override { return x[0]; }
    void gradient(std::span<const double> x, std::span<double> g) const override {
      for (size_t i = 0; i < x.size(); ++i) g[i] = i == 0 ? 1.0 : 0.0;
    }
    double hessian_quad(std::span<const double>, std::span<const double>) const override {
      return 0.0;
    }
  } linear;
  ClassACheck c = class_A_check(linear, 2, 256);
  CHECK_FALSE(c.pass);
}

TEST_CASE("eps-truncated generator equals the direct restriction") {
  ModelParams m = make_model(1, 1.0, 1.0, 0.0, 0.0);
  PsiDelta psi(0.3);
  double x = 2.0;
  auto f = [&](double z) {
    return (psi.value_t((x + z) * (x + z)) - psi.value_t(x * x)) * 2.0 *
           std::pow(std::abs(z), -2.0);
  };
  QuadOptions o;
  o.abs_tol = 1e-12;
  QuadResult left = integrate(f, -1.0, -0.2, o);
  QuadResult right = integrate(f, 0.2, 1.0, o);
  CHECK(apply_L1_eps_truncated(psi, x, m, 0.2, 1e-11) ==
        doctest::Approx(left.value + right.value).epsilon(1e-8));
}
