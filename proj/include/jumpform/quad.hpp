// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace jumpform {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Known algebraic singularity of the integrand: |f| ~ |x - x0|^strength near
// x0. Segments adjacent to such a point are integrated after the power-
// peeling substitution x = x0 +- u^m.
struct SingularHint {
  double x;
  double strength;
};

struct QuadOptions {
  double abs_tol = 1e-8;
  double rel_tol = 0.0;
  int max_panels = 4000;
  // Decay of f at +infinity (f ~ x^{-tail_power}); used to build the
  // regularizing substitution r = L v^{-1/(tail_power-1)} on the tail.
  double tail_power = 2.0;
  std::vector<SingularHint> singular;
  std::vector<double> breakpoints;  // plain split points, no substitution
};

// Adaptive Gauss-Kronrod (G7,K15) over [lo, hi]; hi may be +infinity.
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadOptions& opts = {});

// int_{r_lo}^{r_hi} f(r) r^{-weight_exponent} dr; r_hi may be +infinity, in
// which case f must stay bounded at infinity (tail handled through
// weight_exponent).
QuadResult integrate_radial(const std::function<double(double)>& f, double r_lo,
                            double r_hi, double weight_exponent, double tol);

// Angular coordinate supplied to (r,s) kernels; 1 -+ s are provided in
// cancellation-free form (2 sin^2(theta/2), 2 cos^2(theta/2)).
struct AngularPoint {
  double s;
  double one_minus_s;
  double one_plus_s;
};

// (r,s) kernel; xi = r - 1 is supplied exactly (from the substituted
// integration variable) so that the kernel's (1,1) singularity can be
// resolved far below double-rounding of r itself.
using RsKernel = std::function<double(double /*r*/, double /*xi*/, const AngularPoint&)>;

struct RsOptions {
  double abs_tol = 1e-8;
  double rel_tol = 0.0;
  int max_cells = 24000;
  // w-exponent of the kernel at the (r,s)=(1,1) corner (kernel ~ w^strength
  // with w = (r-1)^2 + 2r(1-s)); drives the substitution exponent there.
  double corner_strength = 0.0;
};

// int_{r_lo}^inf ( int_0^1 g(r,s) (1-s^2)^{(d-3)/2} ds ) dr / r^{1+alpha}.
// For d = 1 the angular integral is replaced by evaluation at s = 1 (the
// exact two-point angular rule for kernels already symmetrized in s).
QuadResult integrate_rs(const RsKernel& g, int d, double alpha, double r_lo,
                        const RsOptions& opts = {});

// int_0^1 h(s) (1-s^2)^{(d-3)/2} ds via s = cos(theta); h(1) for d = 1.
QuadResult integrate_angular(const std::function<double(const AngularPoint&)>& h,
                             int d, double tol);

// Full-range variant int_{-1}^1 h(s) (1-s^2)^{(d-3)/2} ds; h(1) + h(-1) for
// d = 1. Optional breakpoints are s-values where the integrand kinks.
QuadResult integrate_angular_full(const std::function<double(const AngularPoint&)>& h,
                                  int d, double tol,
                                  const std::vector<double>& s_breaks = {});

// 2D adaptive tensor Gauss-Kronrod cubature with quadtree refinement.
struct Quad2DOptions {
  double abs_tol = 1e-8;
  double rel_tol = 0.0;
  int max_cells = 24000;
};
QuadResult integrate2d(const std::function<double(double, double)>& f, double x0,
                       double x1, double y0, double y1, const Quad2DOptions& opts = {});

// Compensated small-jump integral int_{0<|z|<1} R(z) nu(dz) in polar form:
// the caller supplies the second-order Taylor-remainder integrand
// R(rho, s) (including coefficient factors), which must vanish like
// O(rho^2) so that the rho^{-(1+alpha)} weight is neutralized. Probe
// evaluations reject integrands violating that contract.
QuadResult integrate_compensated_smalljump(
    const std::function<double(double, const AngularPoint&)>& remainder, int d,
    double alpha, double tol);

}  // namespace jumpform
