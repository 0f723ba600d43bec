// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "jumpform/quad.hpp"
#include "jumpform/specfun.hpp"

namespace jumpform {

// Pointwise kernels of the big-jump polar reduction. Angular arguments are
// passed as AngularPoint so that 1 -+ s stay cancellation-free near the
// kernel's (r,s) = (1,1) singular point.
double jq_tilde(double delta, double r, const AngularPoint& s, double q);
double jq(double delta, double x_norm, double r, const AngularPoint& s, double q);
// K(delta,r,s) + K(delta,r,-s): the symmetrized log kernel of the delta-
// derivative, finite and O(r^2) at r -> 0.
double kq_pair(double delta, double r, const AngularPoint& s, double q);

// xi = r-1 passed exactly (quadrature-facing variants; the substituted
// integration variables carry the offset from the singular point to full
// precision).
double jq_tilde_xi(double delta, double r, double xi, const AngularPoint& s, double q);
double jq_xi(double delta, double x_norm, double r, double xi, const AngularPoint& s,
             double q);
double kq_pair_xi(double delta, double r, double xi, const AngularPoint& s, double q);

double critical_q(int d, double alpha);  // (alpha - d)/2

// Admissible delta ceiling delta_0 = eta + 1/2 with eta the midpoint of
// (-1/2, q + (d-1)/2); equals (2q + d)/4. Requires q > -d/2.
double delta_max(double q, int d);

struct LambdaParams {
  double q;
  int d;
  double alpha;
};

bool in_validated_regime(const LambdaParams& lp);  // d >= 2 and q in [(a-d)/2, 0)

// Lambda_q(delta), its delta-derivative, and the finite-x profile F_q.
QuadResult lambda_functional(double delta, const LambdaParams& lp, double tol = 1e-8);
QuadResult lambda_derivative(double delta, const LambdaParams& lp, double tol = 1e-8);
QuadResult fq_profile(double delta, double x_norm, const LambdaParams& lp, double tol = 1e-8);

// The two log-moment integrals with -Lambda_q'(0) = I1 + I2(q); I1 is
// q-independent, and I2((alpha-d)/2) = -I1.
double i1_closed(int d, double alpha);
SeriesValue i1_series(int d, double alpha);
QuadResult i1_quad(int d, double alpha, double tol = 1e-8);
QuadResult i2_quad(double q, int d, double alpha, double tol = 1e-8);
double i2_series_critical(int d, double alpha);  // d >= 2 only

struct LambdaResult {
  double q, delta;
  int d;
  double alpha;
  double lambda_quad;
  double lambda_prime_quad;
  double lambda_prime_at_zero;
  double I1_quad, I1_closed, I1_series, I2_quad;
  double err_lambda, err_lambda_prime, err_I1_quad, err_I2_quad, err_I1_series;
  bool outside_validated_regime;
  std::string to_json() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

LambdaResult evaluate_lambda_suite(const LambdaParams& lp, double delta, double tol = 1e-8);

}  // namespace jumpform
