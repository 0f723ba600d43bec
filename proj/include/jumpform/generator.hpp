// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "jumpform/model.hpp"
#include "jumpform/quad.hpp"
#include "jumpform/testfunction.hpp"

namespace jumpform {

// Numerical evaluation of the small-jump generator applied to a radial C2
// function at x = x_norm * e1 (the generator image of a radial function is
// radial). The value is the sum of the compensated integral and the
// coefficient-asymmetry drift integral; both require p <= 1.
double apply_L1(const RadialC2& u, double x_norm, const ModelParams& m, double tol = 1e-9);
double apply_L1_compensated(const RadialC2& u, double x_norm, const ModelParams& m,
                            double tol = 1e-9);
double apply_L1_drift(const RadialC2& u, double x_norm, const ModelParams& m,
                      double tol = 1e-9);

// Uncompensated big-jump generator (stable tail of index alpha on |z| >= 1)
// applied to a bounded radial function; requires q < alpha/2.
double apply_L2(const RadialC2& u, double x_norm, const ModelParams& m, double tol = 1e-9);

// Generator of the epsilon-truncated small-jump chain (kernel restricted to
// eps < |z| < 1, no compensator). Coincides with the restriction of the
// principal-value small-jump generator because nu is symmetric.
double apply_L1_eps_truncated(const RadialC2& u, double x_norm, const ModelParams& m,
                              double eps, double tol = 1e-9);

struct DriftReport {
  double delta = 0.0;
  double p = 0.0;
  std::vector<double> radii;
  std::vector<double> values;      // L1 psi_delta at x = r e1
  std::vector<double> normalized;  // value (1+r^2)^{1-p} / psi_delta
  double fitted_C = 0.0;
  double fitted_M = 0.0;
  bool all_negative_beyond_M = false;
  // Leading-order constant of the proof's upper bound at eps = 0:
  // -(2 delta c_*/d)(d + 2p - 2(delta+1)).
  double proof_limit_constant = 0.0;
  std::string to_csv() const;
  std::string to_json() const;
};

std::vector<double> default_radii();  // {2^k : k = 0..20}

// Requires p > (2-d)/2 and 0 < delta < p - (2-d)/2.
DriftReport drift_profile_L1(const ModelParams& m, double delta,
                             const std::vector<double>& radii, double tol = 1e-8);

enum class GeneratorPart { L1, L2 };

struct DecayFit {
  double slope;       // d log|Lu| / d log(1+|x|^2)
  double intercept;
  int points_used;
};
DecayFit decay_check(const RadialC2& u, const ModelParams& m, GeneratorPart which,
                     const std::vector<double>& radii, double tol = 1e-9);

// Decay exponent asserted by the generator bounds: p-1 for L1; the
// three-case F_q exponent for L2 (log factor at q = -d/2 not included).
double theoretical_decay_exponent(const ModelParams& m, GeneratorPart which);

struct ClassACheck {
  double c1_estimate;
  double c2_estimate;
  bool pass;
};
// Probes sup_x gamma(x) |<grad u, z>| / |z| and the Hessian analogue on a
// deterministic grid of radii up to 1e6 with pseudo-random directions.
ClassACheck class_A_check(const C2Function& u, int d, int probe_count = 512);

}  // namespace jumpform
