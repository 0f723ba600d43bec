// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace jumpform {

// Gamma-family evaluators. Pole inputs (nonpositive integers where the
// function has a pole) throw std::domain_error rather than returning NaN.
double gamma(double x);
double digamma(double x);
double beta(double x, double y);
double pochhammer(double lambda, int n);

// log|Gamma(x)| together with the sign of Gamma(x).
struct LogGamma {
  double log_abs;
  int sign;  // -1, 0 (pole of the reciprocal, Gamma == inf), +1
};
LogGamma log_gamma_signed(double x);

// Result of a truncated/accelerated series evaluation.
struct SeriesValue {
  double value = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;  // estimated truncation error, >= 0
  bool converged = false;
};

// Sums sum_{n>=0} term(n). Direct summation is used while the terms decay
// fast; slowly (power-law) decaying tails are resummed with a Levin
// u-transform on the partial sums. tail_bound reports the stabilization
// residual of whichever route produced the value.
SeriesValue accelerated_sum(const std::vector<double>& terms);

// Series limit for terms with a known smooth tail t_n ~ n^{-gamma}
// (A + B log n)(1 + c1/n + ...): fits the Euler-Maclaurin remainder model
// R_N = N^{1-gamma} sum_k (a_k + b_k log N) N^{-k} on a geometric ladder of
// partial sums and extrapolates. Far more accurate than order-agnostic
// acceleration when gamma is known.
SeriesValue tail_fit_sum(const std::vector<double>& terms, double gamma, bool with_log);

// sum_n (alpha/2)_n (-alpha/2)_n / ((d/2)_n n!)  ==
//   Gamma(d/2)^2 / (Gamma((d+alpha)/2) Gamma((d-alpha)/2))
SeriesValue gauss_sum(int d, double alpha);
double gauss_sum_closed(int d, double alpha);

// The two weighted sums over n of Gamma(n - alpha/2)/n!:
//   unweighted -> 0,
//   psi(n + d/2)-weighted -> -2 Gamma(-a/2) Gamma(1+a/2) Gamma(d/2)
//                            / (a Gamma((d+a)/2)).
struct DigammaWeightedSums {
  SeriesValue weighted;
  SeriesValue unweighted;
};
DigammaWeightedSums digamma_weighted_sum(int d, double alpha);
double digamma_weighted_closed(int d, double alpha);

// sum_{k=0}^{n-1} binom(a,k) (-1)^k / (n-k), evaluated directly and through
// the closed form (-1)^n binom(a,n) (psi(n-a) - psi(-a)). Integer a is
// rejected (digamma pole).
double partial_binomial_digamma(double a, int n);         // closed form
double partial_binomial_digamma_direct(double a, int n);  // finite sum

double binomial_coefficient(double a, int k);  // binom(a,k), real upper index

// One row of the identity-check report: lhs is the series/direct route,
// rhs the closed form.
struct IdentityRow {
  std::string name;
  std::string params;
  double lhs;
  double rhs;
  double abs_err;
};
std::vector<IdentityRow> run_identity_suite(const std::vector<int>& ds,
                                            const std::vector<double>& alphas);

}  // namespace jumpform
