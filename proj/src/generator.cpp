// SPDX-License-Identifier: Apache-2.0
#include "jumpform/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "jumpform/rng.hpp"

namespace jumpform {

namespace {

// Radial generator values decay like powers of 1+|x|^2; a fixed absolute
// quadrature tolerance turns them into noise at large radii. Re-run with a
// tolerance tied to the observed magnitude until the value is resolved to
// ~1e-7 relative.
template <typename Eval>
double scale_adaptive(const Eval& eval, double tol) {
  double abs_tol = tol;
  double v = eval(abs_tol);
  for (int pass = 0; pass < 4; ++pass) {
    const double target = std::max(std::abs(v) * 1e-7, 1e-280);
    if (abs_tol <= target) break;
    abs_tol = target;
    v = eval(abs_tol);
  }
  return v;
}

void require_stable_pair(const ModelParams& m, const char* who) {
  if (m.kernel_variant != KernelVariant::stable_pair)
    throw std::invalid_argument(std::string(who) +
                                ": only the stable pair kernel feeds the generator surface");
}

void require_small_jump_ok(const ModelParams& m) {
  if (m.p > 1.0)
    throw std::invalid_argument("apply_L1: p > 1 outside the validated range (finiteness fails)");
}

// Taylor remainder u(x+z) - u(x) - <grad u(x), z> for a radial profile,
// written in (rho, s): t+ = (X-rho)^2 + 2 X rho (1+s), <x,z> = X rho s.
// Near-cancellation region switches to the midpoint-Hessian form
// 1/2 <H(x + z/3) z, z>, which matches the remainder to third order.
double taylor_remainder(const RadialC2& u, double X, double t0, double rho,
                        const AngularPoint& ap) {
  const double dt = 2.0 * X * rho * ap.s + rho * rho;
  if (std::abs(dt) > 1e-3 * (1.0 + t0)) {
    return u.value_t(t0 + dt) - u.value_t(t0) - u.d1_t(t0) * 2.0 * X * rho * ap.s;
  }
  const double tm = t0 + (2.0 / 3.0) * X * rho * ap.s + rho * rho / 9.0;
  const double yz = X * rho * ap.s + rho * rho / 3.0;
  return u.d1_t(tm) * rho * rho + 2.0 * u.d2_t(tm) * yz * yz;
}

}  // namespace

double apply_L1_compensated(const RadialC2& u, double x_norm, const ModelParams& m,
                            double tol) {
  require_stable_pair(m, "apply_L1");
  require_small_jump_ok(m);
  const Coefficients co = coefficients(m);
  const double X = x_norm, t0 = X * X;
  const double pref = angular_prefactor(m.d);
  const double a1x = co.a1_t(t0);
  auto remainder = [&](double rho, const AngularPoint& ap) {
    const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
    return pref * taylor_remainder(u, X, t0, rho, ap) * (a1x + co.a1_t(tp));
  };
  return scale_adaptive(
      [&](double abs_tol) {
        return integrate_compensated_smalljump(remainder, m.d, m.alpha, abs_tol).value;
      },
      tol);
}

double apply_L1_drift(const RadialC2& u, double x_norm, const ModelParams& m, double tol) {
  require_stable_pair(m, "apply_L1");
  require_small_jump_ok(m);
  if (m.p == 0.0) return 0.0;  // a1 constant: exact cancellation
  const double X = x_norm, t0 = X * X;
  const double pref = angular_prefactor(m.d);
  const double du = u.d1_t(t0);
  if (X == 0.0 || du == 0.0) return 0.0;
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tm = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_minus_s;
      // a1(x+z) - a1(x-z), cancellation-free: tp - tm = 4 X rho s exactly.
      const double diff =
          std::pow(1.0 + tm, m.p) * std::expm1(m.p * std::log1p(4.0 * X * rho * ap.s / (1.0 + tm)));
      return 2.0 * du * X * rho * ap.s * diff;
    };
    QuadResult r = integrate_angular_full(h, m.d, 1e-300);
    return pref * r.value;
  };
  auto f = [&](double rho) {
    return 0.5 * inner(rho) * std::pow(rho, m.d - 1.0) * std::pow(rho, -(m.d + m.alpha));
  };
  return scale_adaptive(
      [&](double abs_tol) {
        QuadOptions o;
        o.abs_tol = abs_tol;
        o.singular.push_back({0.0, 1.0 - m.alpha});
        return integrate(f, 0.0, 1.0, o).value;
      },
      tol);
}

double apply_L1(const RadialC2& u, double x_norm, const ModelParams& m, double tol) {
  return apply_L1_compensated(u, x_norm, m, 0.5 * tol) +
         apply_L1_drift(u, x_norm, m, 0.5 * tol);
}

double apply_L2(const RadialC2& u, double x_norm, const ModelParams& m, double tol) {
  require_stable_pair(m, "apply_L2");
  require_big_jump_ok(m);
  const Coefficients co = coefficients(m);
  const double X = x_norm, t0 = X * X;
  const double pref = angular_prefactor(m.d);
  const double a2x = co.a2_t(t0);
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
      const double dt = rho * (rho + 2.0 * X * ap.s);  // tp - t0, cancellation-free
      return u.jump_diff(t0, tp, dt) * (a2x + co.a2_t(tp));
    };
    QuadResult r = integrate_angular_full(h, m.d, 1e-300);
    return pref * r.value;
  };
  auto f = [&](double rho) {
    return inner(rho) * std::pow(rho, m.d - 1.0) * std::pow(rho, -(m.d + m.alpha));
  };
  return scale_adaptive(
      [&](double abs_tol) {
        QuadOptions o;
        o.abs_tol = abs_tol;
        o.tail_power = 1.0 + m.alpha - 2.0 * std::max(m.q, 0.0);
        if (X > 2.0) o.breakpoints = {X - 1.0, X, X + 1.0};
        return integrate(f, 1.0, std::numeric_limits<double>::infinity(), o).value;
      },
      tol);
}

double apply_L1_eps_truncated(const RadialC2& u, double x_norm, const ModelParams& m,
                              double eps, double tol) {
  require_stable_pair(m, "apply_L1_eps_truncated");
  require_small_jump_ok(m);
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("apply_L1_eps_truncated: eps outside (0,1)");
  const Coefficients co = coefficients(m);
  const double X = x_norm, t0 = X * X;
  const double pref = angular_prefactor(m.d);
  const double a1x = co.a1_t(t0);
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
      const double dt = rho * (rho + 2.0 * X * ap.s);
      return u.jump_diff(t0, tp, dt) * (a1x + co.a1_t(tp));
    };
    QuadResult r = integrate_angular_full(h, m.d, 1e-300);
    return pref * r.value;
  };
  auto f = [&](double rho) {
    return inner(rho) * std::pow(rho, m.d - 1.0) * std::pow(rho, -(m.d + m.alpha));
  };
  QuadOptions o;
  o.abs_tol = tol;
  QuadResult r = integrate(f, eps, 1.0, o);
  return r.value;
}

std::vector<double> default_radii() {
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(std::pow(2.0, k));
  return out;
}

DriftReport drift_profile_L1(const ModelParams& m, double delta,
                             const std::vector<double>& radii, double tol) {
  require_stable_pair(m, "drift_profile_L1");
  if (!(m.p > (2.0 - m.d) / 2.0))
    throw std::invalid_argument("drift_profile_L1: requires p > (2-d)/2");
  if (!(delta > 0.0 && delta < m.p - (2.0 - m.d) / 2.0))
    throw std::invalid_argument("drift_profile_L1: delta outside (0, p-(2-d)/2)");
  DriftReport rep;
  rep.delta = delta;
  rep.p = m.p;
  PsiDelta psi(delta);
  for (double r : radii) {
    double v = apply_L1(psi, r, m, tol);
    rep.radii.push_back(r);
    rep.values.push_back(v);
    rep.normalized.push_back(v * std::pow(1.0 + r * r, 1.0 - m.p) / psi.value_t(r * r));
  }
  const double cstar = levy_kernel(m).c_star();
  rep.proof_limit_constant =
      -(2.0 * delta * cstar / m.d) * (m.d + 2.0 * m.p - 2.0 * (delta + 1.0));
  // fitted_M: smallest radius from which every normalized value is negative.
  int n = static_cast<int>(radii.size());
  int first_all_neg = -1;
  for (int i = n - 1; i >= 0; --i) {
    if (rep.normalized[i] < 0.0)
      first_all_neg = i;
    else
      break;
  }
  if (first_all_neg >= 0) {
    rep.all_negative_beyond_M = true;
    rep.fitted_M = radii[first_all_neg];
    double sup = -std::numeric_limits<double>::infinity();
    for (int i = first_all_neg; i < n; ++i) sup = std::max(sup, rep.normalized[i]);
    rep.fitted_C = -sup;
  } else {
    rep.all_negative_beyond_M = false;
    rep.fitted_M = std::numeric_limits<double>::quiet_NaN();
    rep.fitted_C = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::string DriftReport::to_csv() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << "radius,raw,normalized\r\n";
  for (size_t i = 0; i < radii.size(); ++i)
    ss << radii[i] << "," << values[i] << "," << normalized[i] << "\r\n";
  return ss.str();
}

std::string DriftReport::to_json() const {
  nlohmann::json j;
  j["delta"] = delta;
  j["p"] = p;
  j["radii"] = radii;
  j["values"] = values;
  j["normalized"] = normalized;
  j["fitted_C"] = fitted_C;
  j["fitted_M"] = fitted_M;
  j["all_negative_beyond_M"] = all_negative_beyond_M;
  j["proof_limit_constant"] = proof_limit_constant;
  return j.dump(2);
}

DecayFit decay_check(const RadialC2& u, const ModelParams& m, GeneratorPart which,
                     const std::vector<double>& radii, double tol) {
  std::vector<double> xs, ys;
  for (double r : radii) {
    double v = (which == GeneratorPart::L1) ? apply_L1(u, r, m, tol) : apply_L2(u, r, m, tol);
    if (v == 0.0) continue;
    xs.push_back(std::log1p(r * r));
    ys.push_back(std::log(std::abs(v)));
  }
  if (xs.size() < 2) throw std::runtime_error("decay_check: not enough nonzero samples");
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return DecayFit{sxy / sxx, my - mx * sxy / sxx, static_cast<int>(xs.size())};
}

double theoretical_decay_exponent(const ModelParams& m, GeneratorPart which) {
  if (which == GeneratorPart::L1) return m.p - 1.0;
  if (m.q > -m.d / 2.0) return m.q - m.alpha / 2.0;
  return -(m.d + m.alpha) / 2.0;
}

ClassACheck class_A_check(const C2Function& u, int d, int probe_count) {
  if (d < 1) throw std::invalid_argument("class_A_check: d < 1");
  Philox4x32 rng(0x9e3779b97f4a7c15ULL, 0);  // fixed stream: deterministic grid
  std::vector<double> x(d), g(d), z(d);
  double near_max1 = 0, far_max1 = 0, near_max2 = 0, far_max2 = 0;
  for (int i = 0; i < probe_count; ++i) {
    double r = std::pow(10.0, 6.0 * (i + 0.5) / probe_count);
    double nx = 0;
    for (int k = 0; k < d; ++k) {
      x[k] = rng.normal();
      nx += x[k] * x[k];
    }
    nx = std::sqrt(nx);
    for (int k = 0; k < d; ++k) x[k] *= r / nx;
    const double gam = gamma_weight(x);
    u.gradient(x, g);
    double c1 = gam * norm(g);
    double c2 = 0.0;
    for (int probe = 0; probe < 8; ++probe) {
      double nz = 0;
      for (int k = 0; k < d; ++k) {
        z[k] = rng.normal();
        nz += z[k] * z[k];
      }
      nz = std::sqrt(nz);
      for (int k = 0; k < d; ++k) z[k] /= nz;
      c2 = std::max(c2, gam * gam * std::abs(u.hessian_quad(x, z)));
    }
    if (r <= 1e3) {
      near_max1 = std::max(near_max1, c1);
      near_max2 = std::max(near_max2, c2);
    } else {
      far_max1 = std::max(far_max1, c1);
      far_max2 = std::max(far_max2, c2);
    }
  }
  ClassACheck out;
  out.c1_estimate = std::max(near_max1, far_max1);
  out.c2_estimate = std::max(near_max2, far_max2);
  out.pass = std::isfinite(out.c1_estimate) && std::isfinite(out.c2_estimate) &&
             far_max1 <= 1.02 * near_max1 + 1e-12 && far_max2 <= 1.02 * near_max2 + 1e-12;
  return out;
}

}  // namespace jumpform
