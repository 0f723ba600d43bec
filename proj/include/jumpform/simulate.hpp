// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jumpform/model.hpp"
#include "jumpform/rng.hpp"
#include "jumpform/testfunction.hpp"

namespace jumpform {

struct SimConfig {
  ModelParams model;
  double x0_norm = 100.0;  // start at x0_norm * e1
  double r_hit = 1.0;      // closed target ball radius
  long max_jumps = 1000000;
  double t_max = std::numeric_limits<double>::infinity();
  long n_paths = 10000;
  uint64_t seed = 1;
  double epsilon_cutoff = 0.0;  // small-jump scheme only
  int threads = 1;
};

struct HittingEstimate {
  long hits = 0;
  long n_paths = 0;
  double freq = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // 95% Wilson
  double theory_bound = 0.0;           // psi_deltaRef ratio bound
  double delta_ref = 0.05;
  long censored = 0;  // budget exhausted without hitting
  double mean_jumps = 0.0;
  std::string to_json() const;
};

struct DynkinResidual {
  double t_star = 0.0;
  double lhs = 0.0;  // MC mean of psi(X_{t and sigma})
  double rhs = 0.0;  // psi(x0) + MC mean of int L2 psi
  double residual = 0.0;
  double se = 0.0;
  long n_paths = 0;
  long budget_overruns = 0;  // paths cut by max_jumps before t_star (bias!)
  std::string to_json() const;
};

// Cubic-Hermite interpolation of a positive radial function on a log-log
// grid, with held-out-midpoint validation and power-law extrapolation
// beyond the grid.
class RadialCache {
 public:
  RadialCache(const std::function<double(double)>& f, double r_min, double r_max,
              int points);
  double operator()(double r) const;
  double max_validation_rel_error() const { return validation_err_; }

 private:
  double y0_, dy_;
  std::vector<double> z_;      // log f at grid
  std::vector<double> slope_;  // dz/dy
  double validation_err_ = 0.0;
};

// Interpolation of a sign-changing radial function whose normalized form
// f(r) (1+r^2)^{norm_pow} is smooth and bounded (generator images of
// psi_delta qualify). Validation error is measured on the normalized scale
// relative to its sup norm.
class SignedRadialCache {
 public:
  SignedRadialCache(const std::function<double(double)>& f, double r_min, double r_max,
                    int points, double norm_pow);
  double operator()(double r) const;
  double max_validation_rel_error() const { return validation_err_; }

 private:
  double y0_, dy_, norm_pow_;
  std::vector<double> w_;  // normalized values at grid
  std::vector<double> slope_;
  double validation_err_ = 0.0;
};

// lambda(x) = int_{|z|>=1} (a2(x) + a2(x+z)) |z|^{-(d+alpha)} dz, radial.
double big_jump_rate(const ModelParams& m, double x_norm, double tol = 1e-9);

// Exact draw from the normalized big-jump law at state x by rejection from
// a two-component Pareto envelope; requires |q| < alpha/2.
std::vector<double> sample_big_jump(std::span<const double> x, const ModelParams& m,
                                    Philox4x32& rng);
double sample_big_jump_1d(double x, const ModelParams& m, Philox4x32& rng);

HittingEstimate run_big_jump_paths(const SimConfig& cfg, double delta_ref = 0.05,
                                   const std::string* event_csv = nullptr,
                                   long logged_paths = 8);

DynkinResidual dynkin_check(const SimConfig& cfg, double delta, double t_star);

// Diagnostic-grade small-jump scheme: kernel restricted to eps < |z| < 1,
// no compensator drift. Because nu is symmetric, the chain generator equals
// the restriction of the principal-value small-jump generator, so the
// eps-truncation is the only bias; it is probed by running eps and eps/2.
struct SmallJumpEpsReport {
  HittingEstimate at_eps;
  HittingEstimate at_half_eps;
  double bias_indicator = 0.0;  // |freq(eps) - freq(eps/2)|
  std::string to_json() const;
};
SmallJumpEpsReport run_small_jump_paths_eps(const SimConfig& cfg, double delta_ref = 0.05);

double small_jump_eps_rate(const ModelParams& m, double x_norm, double eps,
                           double tol = 1e-9);

// One-step Monte Carlo generator estimate (E[u(X_h)] - u(x))/h for the
// eps-truncated small-jump chain; returns (estimate, standard error).
struct McEstimate {
  double value;
  double se;
};
McEstimate mc_generator_estimate_eps(const RadialC2& u, double x_norm,
                                     const ModelParams& m, double eps, double h,
                                     long n_samples, uint64_t seed);

// Radial CDF of the one-step radial law |Z| under the big-jump kernel at x;
// used by distribution tests.
double big_jump_radial_cdf(const ModelParams& m, double x_norm, double t,
                           double rate, double tol = 1e-9);

}  // namespace jumpform
