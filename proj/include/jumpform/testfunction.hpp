// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>

#include "jumpform/model.hpp"

namespace jumpform {

// Twice continuously differentiable test function on R^d.
struct C2Function {
  virtual ~C2Function() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> g) const = 0;
  // <H(u)(x) z, z>
  virtual double hessian_quad(std::span<const double> x, std::span<const double> z) const = 0;
};

// Radial profile u(x) = U(t) with t = |x|^2; the generator quadratures only
// need the scalar derivatives U', U''.
struct RadialC2 : C2Function {
  virtual double value_t(double t) const = 0;
  virtual double d1_t(double t) const = 0;
  virtual double d2_t(double t) const = 0;
  // u(tp) - u(t0) with dt = tp - t0 supplied in exact (polar) form;
  // overridden where the generic expression loses precision to cancellation
  // (generator integrands difference u across jumps).
  virtual double jump_diff(double t0, double tp, double /*dt*/) const {
    return value_t(tp) - value_t(t0);
  }

  double value(std::span<const double> x) const override { return value_t(norm2(x)); }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    double c = 2.0 * d1_t(norm2(x));
    for (size_t i = 0; i < x.size(); ++i) g[i] = c * x[i];
  }
  double hessian_quad(std::span<const double> x, std::span<const double> z) const override {
    double t = norm2(x), xz = dot(x, z);
    return 2.0 * d1_t(t) * norm2(z) + 4.0 * d2_t(t) * xz * xz;
  }
};

// psi_delta(x) = (1+|x|^2)^(-delta)
struct PsiDelta final : RadialC2 {
  double delta;
  explicit PsiDelta(double delta_) : delta(delta_) {}
  double value_t(double t) const override { return std::pow(1.0 + t, -delta); }
  double d1_t(double t) const override { return -delta * std::pow(1.0 + t, -delta - 1.0); }
  double d2_t(double t) const override {
    return delta * (delta + 1.0) * std::pow(1.0 + t, -delta - 2.0);
  }
  double jump_diff(double t0, double tp, double dt) const override {
    if (std::abs(dt) < 0.5 * (1.0 + t0))
      return value_t(t0) * std::expm1(-delta * std::log1p(dt / (1.0 + t0)));
    return value_t(t0) * std::expm1(-delta * (std::log1p(tp) - std::log1p(t0)));
  }
};

struct ConstantFn final : RadialC2 {
  double c;
  explicit ConstantFn(double c_ = 1.0) : c(c_) {}
  double value_t(double) const override { return c; }
  double d1_t(double) const override { return 0.0; }
  double d2_t(double) const override { return 0.0; }
};

// u(x) = |x|^2; its compensated small-jump remainder is exactly |z|^2.
struct SquaredNorm final : RadialC2 {
  double value_t(double t) const override { return t; }
  double d1_t(double) const override { return 1.0; }
  double d2_t(double) const override { return 0.0; }
  double jump_diff(double, double, double dt) const override { return dt; }
};

inline double gamma_weight(std::span<const double> x) { return std::sqrt(4.0 + norm2(x)); }
inline double gamma_weight_r(double r) { return std::sqrt(4.0 + r * r); }

}  // namespace jumpform
