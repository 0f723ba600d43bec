// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jumpform/model.hpp"

namespace jumpform {

// Radial coefficient bound c (1+r)^growth log(2+r)^lp loglog(3+r)^llp; the
// family covers the polynomial-with-slowly-varying-correction bounds used
// by the worked recurrence examples.
struct RadialBound {
  double c = 1.0;
  double growth = 0.0;
  double log_pow = 0.0;
  double loglog_pow = 0.0;
  double operator()(double r) const;
};

struct RecurrenceInput {
  ModelParams model;  // kernel (alpha small / beta big, variant)
  std::function<double(double)> a1, a2;
  double a2_tail_growth = 0.0;  // a2(r) ~ r^growth: tail transforms/preconditions
  bool has_diffusion = false;
  RadialBound diffusion_bound;  // radial bound on the local part's energy density
  double r0 = 2.0;
};

// Coefficients and tail metadata from the model's own (1+r^2)^{p,q} powers.
RecurrenceInput recurrence_input_from_model(const ModelParams& m);
// Boundary-growth coefficients of the worked examples: a1 = (1+r)^{2-d} log(2+r);
// a2 = (1+r)^{(beta^2-cap)-d} log(2+r) (non-critical) or
// (1+r)^{2-d} loglog(3+r) at the critical big index 2; the log-perturbed
// kernel takes a2 = log(2+r)^beta (1+r)^{-d}.
void set_boundary_growth_coefficients(RecurrenceInput& in, bool critical_big_index);

struct MFunctionals {
  double M0;
  double M1;
  double M2;
};
// M0 over B(r); M1 over B(r) x B(r) with the |x-y|^2 surrogate for
// (rho(x)-rho(y))^2; M2 over B(r) x B(R)^c with the log(|y|/R) weight.
MFunctionals m_functionals(const RecurrenceInput& in, double r, double R,
                           double tol = 1e-6);

struct NTerms {
  double small_part;   // s^{-2} int_{B(s)} a1
  double big_inner;    // int_{B(s)} a2 * [moment+log bracket]
  double big_tail;     // s^d int_{|y|>=s} a2 log(|y|/s) nu
  double local_part;   // s^{-2} M0(s), zero without a diffusion part
  double total;
};
NTerms n_of_s(const RecurrenceInput& in, double s, double tol = 1e-8);

enum class LFamily { log_family, log_loglog, power };
struct SlowlyVaryingL {
  LFamily family = LFamily::log_family;
  double c = 1.0;
  double kappa = 0.0;  // power family exponent
  double operator()(double s) const;
  std::string name() const;
};

// Fits the constant: c = max over the s-grid of N(s)/family(s).
SlowlyVaryingL fit_L(const RecurrenceInput& in, LFamily family, double kappa,
                     const std::vector<double>& s_grid);

enum class IntegralVerdict { diverges_numerically, converges_numerically, inconclusive };
std::string verdict_name(IntegralVerdict v);

struct IntegralTestReport {
  IntegralVerdict verdict;
  std::vector<double> decade_increments;  // int over s in [10^j, 10^{j+1}]
  double partial_integral;
  std::string to_json() const;
};
// Classifies int_{r0}^{S_max} ds/(s L(s)) by the decay pattern of its decade
// increments; divergence of an improper integral is not finitely decidable,
// so an honest inconclusive verdict exists.
IntegralTestReport integral_test(const SlowlyVaryingL& L, double r0, double s_max = 1e12);

struct CapacityChain {
  int n_layers;
  std::vector<double> layer_radii;
  double energy;       // E(u_N, u_N) of the explicit chain function
  double bound_rhs;    // K (int_r^R ds/(s L))^{-1} with the frozen K
  bool bound_holds;
  std::string to_json() const;
};
// Builds the chain cut function with radii s_n = (2 c0)^n r and weights
// proportional to 1/L(s_{n-1}), evaluates its jump (+ local bound) energy by
// quadrature, and compares against the capacity bound with the frozen
// calibration constant K.
CapacityChain capacity_chain_bound(const RecurrenceInput& in, const SlowlyVaryingL& L,
                                   double r, double R, double c0, double tol = 1e-4);

// Frozen calibration constant of the capacity bound (Theorem-level existence
// only; the value is a calibration artifact, fitted once on recurrent-regime
// models and kept fixed).
inline constexpr double kCapacityChainK = 12.0;

// Radial-profile form energy E(u,u) = iint (u(|x|)-u(|y|))^2 J(dx dy) for a
// Lipschitz radial profile; exposed for tests.
double radial_form_energy(const RecurrenceInput& in,
                          const std::function<double(double)>& profile, double support_hi,
                          const std::vector<double>& profile_breaks, double tol = 1e-4);

}  // namespace jumpform
