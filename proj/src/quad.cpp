// SPDX-License-Identifier: Apache-2.0
#include "jumpform/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace jumpform {

namespace {

// QUADPACK (G7,K15) nodes and weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
  double value;
  double error;
};

// One G7/K15 pass over [a,b] with the QUADPACK error heuristic.
template <typename F>
PanelEval gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0, resabs = 0.0;
  for (int i = 0; i < 7; ++i) {
    resk += kWgk[i] * (fv[i] + fv[14 - i]);
    resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
  }
  resk += kWgk[7] * fv[7];
  resabs += kWgk[7] * std::abs(fv[7]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  resg += kWg[3] * fv[7];
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fv[7] - reskh);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::abs(fv[i] - reskh) + std::abs(fv[14 - i] - reskh));
  double err = std::abs(resk - resg) * h;
  resasc *= h;
  resabs *= h;
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    err = std::max(err, eps50 * resabs);
  return {resk * h, err};
}

struct Segment {
  std::function<double(double)> f;  // already mapped to local coordinate
  double t0, t1;
};

struct Panel {
  double value, error;
  double t0, t1;
  int seg;
  long id;
  bool operator<(const Panel& o) const {
    if (error != o.error) return error < o.error;
    return id > o.id;  // deterministic tie-break
  }
};

double substitution_exponent(double strength) {
  if (strength >= 1.0) return 1.0;
  double m = std::ceil(3.0 / std::max(0.06, 1.0 + strength));
  return std::clamp(m, 1.0, 50.0);
}

QuadResult run_segments(std::vector<Segment> segments, double abs_tol, double rel_tol,
                        int max_panels) {
  std::priority_queue<Panel> heap;
  long evals = 0, id = 0;
  double total = 0.0, total_err = 0.0, floor_err = 0.0;
  auto push = [&](int seg, double t0, double t1) {
    PanelEval pe = gk15(segments[seg].f, t0, t1);
    evals += 15;
    Panel p{pe.value, pe.error, t0, t1, seg, id++};
    total += p.value;
    total_err += p.error;
    heap.push(p);
  };
  for (size_t s = 0; s < segments.size(); ++s) push(static_cast<int>(s), segments[s].t0, segments[s].t1);

  int panels = static_cast<int>(segments.size());
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         total_err - floor_err > 0.05 * abs_tol && panels < max_panels && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    const double width = worst.t1 - worst.t0;
    const double scale = std::abs(worst.t0) + std::abs(worst.t1) + 1.0;
    if (width < 1e-15 * scale) {
      floor_err += worst.error;  // cannot refine further; keep its contribution
      continue;
    }
    total -= worst.value;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.t0 + worst.t1);
    push(worst.seg, worst.t0, mid);
    push(worst.seg, mid, worst.t1);
    ++panels;
  }
  QuadResult r;
  r.value = total;
  r.abs_error_estimate = total_err;
  r.evaluations = evals;
  r.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total));
  return r;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double lo, double hi,
                     const QuadOptions& opts) {
  if (!(lo < hi)) {
    if (lo == hi) return QuadResult{0.0, 0.0, 0, true};
    throw std::invalid_argument("integrate: lo > hi");
  }
  const bool infinite = std::isinf(hi);

  // Assemble cut points and per-point strengths.
  std::vector<double> cuts{lo};
  std::vector<SingularHint> hints = opts.singular;
  std::sort(hints.begin(), hints.end(), [](auto& a, auto& b) { return a.x < b.x; });
  auto strength_at = [&](double x) {
    for (const auto& h : hints)
      if (h.x == x) return h.strength;
    return 1.0;  // no hint: treated as regular
  };
  for (const auto& h : hints)
    if (h.x >= lo && (infinite || h.x <= hi)) cuts.push_back(h.x);
  for (double b : opts.breakpoints)
    if (b > lo && (infinite || b < hi)) cuts.push_back(b);
  if (!infinite) cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // Pre-split segments spanning many octaves: a single Gauss-Kronrod panel
  // over (a, 1e12) samples no node near a, returns ~0 with error estimate
  // ~0, and adaptivity never recovers.
  {
    std::vector<double> refined;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      double a = cuts[i];
      const double b = cuts[i + 1];
      refined.push_back(a);
      if (a == 0.0 && b > 16.0) {
        refined.push_back(1.0);
        a = 1.0;
      }
      if (a > 0.0 && b / a > 16.0)
        for (double g = a * 16.0; g < b / 4.0; g *= 16.0) refined.push_back(g);
    }
    refined.push_back(cuts.back());
    std::sort(refined.begin(), refined.end());
    refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
    cuts.swap(refined);
  }
  const double finite_hi =
      infinite ? std::max(cuts.back() + 1.0, cuts.back() * 2.0) : hi;

  std::vector<Segment> segs;
  auto add_finite = [&](double a, double b) {
    double ga = strength_at(a), gb = strength_at(b);
    const bool sub_a = ga < 1.0, sub_b = gb < 1.0;
    // offsets that underflow to zero would evaluate f at the singular
    // endpoint itself; their jacobian weight vanishes, so the contribution
    // is zero
    // If the offset is lost to rounding the sample would sit exactly on the
    // singular point; drop it (the unresolvable band carries the mass of the
    // last ~1e-16 of the interval only).
    auto from_lo = [f](double a_, double ma) {
      return [f, a_, ma](double u) {
        const double off = std::pow(u, ma);
        const double t = a_ + off;
        if (t == a_) return 0.0;
        return f(t) * ma * std::pow(u, ma - 1.0);
      };
    };
    auto from_hi = [f](double b_, double mb) {
      return [f, b_, mb](double u) {
        const double off = std::pow(u, mb);
        const double t = b_ - off;
        if (t == b_) return 0.0;
        return f(t) * mb * std::pow(u, mb - 1.0);
      };
    };
    if (sub_a && sub_b) {
      double mid = 0.5 * (a + b);
      double ma = substitution_exponent(ga), mb = substitution_exponent(gb);
      segs.push_back({from_lo(a, ma), 0.0, std::pow(mid - a, 1.0 / ma)});
      segs.push_back({from_hi(b, mb), 0.0, std::pow(b - mid, 1.0 / mb)});
    } else if (sub_a) {
      double ma = substitution_exponent(ga);
      segs.push_back({from_lo(a, ma), 0.0, std::pow(b - a, 1.0 / ma)});
    } else if (sub_b) {
      double mb = substitution_exponent(gb);
      segs.push_back({from_hi(b, mb), 0.0, std::pow(b - a, 1.0 / mb)});
    } else {
      segs.push_back({f, a, b});
    }
  };

  for (size_t i = 0; i + 1 < cuts.size(); ++i) add_finite(cuts[i], cuts[i + 1]);
  if (infinite) {
    if (cuts.back() < finite_hi) add_finite(cuts.back(), finite_hi);
    // Tail: r = L v^{-1/(p-1)} turns f ~ r^{-p} into a bounded integrand on (0,1].
    const double p = opts.tail_power;
    if (!(p > 1.0)) throw std::invalid_argument("integrate: tail_power must exceed 1");
    const double L = finite_hi, e = 1.0 / (p - 1.0);
    segs.push_back({[f, L, e, p](double v) {
                      double r = L * std::pow(v, -e);
                      return f(r) * L * e * std::pow(v, -e - 1.0);
                    },
                    0.0, 1.0});
  }
  return run_segments(std::move(segs), opts.abs_tol, opts.rel_tol, opts.max_panels);
}

QuadResult integrate_radial(const std::function<double(double)>& f, double r_lo,
                            double r_hi, double weight_exponent, double tol) {
  QuadOptions o;
  o.abs_tol = tol;
  o.tail_power = std::max(1.2, weight_exponent);
  auto g = [f, weight_exponent](double r) { return f(r) * std::pow(r, -weight_exponent); };
  return integrate(g, r_lo, r_hi, o);
}

// ---------------------------------------------------------------------------
// 2D adaptive tensor cubature.

namespace {

struct Cell {
  double value, error;
  double x0, x1, y0, y1;
  long id;
  bool operator<(const Cell& o) const {
    if (error != o.error) return error < o.error;
    return id > o.id;
  }
};

template <typename F>
Cell eval_cell(const F& f, double x0, double x1, double y0, double y1, long id) {
  const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
  const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
  double nodes_x[15], nodes_y[15];
  for (int i = 0; i < 7; ++i) {
    nodes_x[i] = cx - hx * kXgk[i];
    nodes_x[14 - i] = cx + hx * kXgk[i];
    nodes_y[i] = cy - hy * kXgk[i];
    nodes_y[14 - i] = cy + hy * kXgk[i];
  }
  nodes_x[7] = cx;
  nodes_y[7] = cy;
  double fv[15][15];
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) fv[i][j] = f(nodes_x[i], nodes_y[j]);
  auto wk = [](int i) { return kWgk[i < 8 ? i : 14 - i]; };
  // Gauss nodes sit at the odd Kronrod indices (and the center).
  auto wg_of = [](int i) {
    int k = (i < 8) ? i : 14 - i;
    return (k % 2 == 1) ? kWg[(k - 1) / 2] : 0.0;
  };
  double kk = 0.0, gk = 0.0, kg = 0.0;
  for (int i = 0; i < 15; ++i) {
    double row_k = 0.0;
    for (int j = 0; j < 15; ++j) row_k += wk(j) * fv[i][j];
    double row_g = 0.0;
    for (int j = 1; j < 15; j += 2) row_g += wg_of(j) * fv[i][j];
    kk += wk(i) * row_k;
    kg += wk(i) * row_g;
    if (i % 2 == 1) gk += wg_of(i) * row_k;
  }
  const double scale = hx * hy;
  double err = (std::abs(kk - gk) + std::abs(kk - kg)) * scale;
  double val = kk * scale;
  err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(val));
  return Cell{val, err, x0, x1, y0, y1, id};
}

}  // namespace

QuadResult integrate2d(const std::function<double(double, double)>& f, double x0,
                       double x1, double y0, double y1, const Quad2DOptions& opts) {
  std::priority_queue<Cell> heap;
  long evals = 0, id = 0;
  double total = 0.0, total_err = 0.0;
  auto push = [&](double a, double b, double c, double d) {
    Cell cell = eval_cell(f, a, b, c, d, id++);
    evals += 225;
    total += cell.value;
    total_err += cell.error;
    heap.push(cell);
  };
  push(x0, x1, y0, y1);
  int cells = 1;
  const double wx = x1 - x0, wy = y1 - y0;
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         cells + 3 <= opts.max_cells && !heap.empty()) {
    Cell w = heap.top();
    heap.pop();
    if ((w.x1 - w.x0) < 1e-14 * wx && (w.y1 - w.y0) < 1e-14 * wy) continue;  // floor
    total -= w.value;
    total_err -= w.error;
    const double mx = 0.5 * (w.x0 + w.x1), my = 0.5 * (w.y0 + w.y1);
    // Split the longer axis when the cell is strongly anisotropic, else both.
    const double ax = (w.x1 - w.x0) / wx, ay = (w.y1 - w.y0) / wy;
    if (ax > 4.0 * ay) {
      push(w.x0, mx, w.y0, w.y1);
      push(mx, w.x1, w.y0, w.y1);
      cells += 1;
    } else if (ay > 4.0 * ax) {
      push(w.x0, w.x1, w.y0, my);
      push(w.x0, w.x1, my, w.y1);
      cells += 1;
    } else {
      push(w.x0, mx, w.y0, my);
      push(mx, w.x1, w.y0, my);
      push(w.x0, mx, my, w.y1);
      push(mx, w.x1, my, w.y1);
      cells += 3;
    }
  }
  QuadResult r;
  r.value = total;
  r.abs_error_estimate = total_err;
  r.evaluations = evals;
  r.converged = total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  return r;
}

// ---------------------------------------------------------------------------
// (r,s) integrals.

namespace {

AngularPoint angular_from_theta(double theta) {
  const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
  return AngularPoint{std::cos(theta), 2.0 * sh * sh, 2.0 * ch * ch};
}

}  // namespace

QuadResult integrate_angular(const std::function<double(const AngularPoint&)>& h, int d,
                             double tol) {
  if (d < 1) throw std::invalid_argument("integrate_angular: d < 1");
  if (d == 1) {
    return QuadResult{h(AngularPoint{1.0, 0.0, 2.0}), 0.0, 1, true};
  }
  auto f = [&h, d](double theta) {
    double w = (d == 2) ? 1.0 : std::pow(std::sin(theta), d - 2);
    return h(angular_from_theta(theta)) * w;
  };
  QuadOptions o;
  o.abs_tol = tol;
  return integrate(f, 0.0, 0.5 * M_PI, o);
}

QuadResult integrate_angular_full(const std::function<double(const AngularPoint&)>& h, int d,
                                  double tol, const std::vector<double>& s_breaks) {
  if (d < 1) throw std::invalid_argument("integrate_angular_full: d < 1");
  if (d == 1) {
    double v = h(AngularPoint{1.0, 0.0, 2.0}) + h(AngularPoint{-1.0, 2.0, 0.0});
    return QuadResult{v, 0.0, 2, true};
  }
  auto f = [&h, d](double theta) {
    double w = (d == 2) ? 1.0 : std::pow(std::sin(theta), d - 2);
    return h(angular_from_theta(theta)) * w;
  };
  QuadOptions o;
  o.abs_tol = tol;
  for (double s : s_breaks)
    if (s > -1.0 && s < 1.0) o.breakpoints.push_back(std::acos(s));
  return integrate(f, 0.0, M_PI, o);
}

namespace {

// Substitution strength for the (1,1) corner: the kernel behaves like
// w^{corner_strength/2}... i.e. |distance|^{corner_strength} along rays, and
// the polar measure adds d-1 powers; E+1 = corner_strength + d must be
// positive for integrability.
double corner_peel_exponent(double corner_strength, int d) {
  double e1 = corner_strength + d;
  if (e1 <= 0.05)
    throw std::invalid_argument("integrate_rs: corner strength not integrable");
  return std::clamp(std::ceil(3.5 / e1), 1.0, 48.0);
}

}  // namespace

QuadResult integrate_rs(const RsKernel& g, int d, double alpha, double r_lo,
                        const RsOptions& opts) {
  if (d < 1) throw std::invalid_argument("integrate_rs: d < 1");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("integrate_rs: alpha outside (0,2)");
  if (r_lo < 0.0) throw std::invalid_argument("integrate_rs: r_lo < 0");

  if (d == 1) {
    // Two-point angular rule: evaluate the (already symmetrized) kernel at
    // s = 1 and integrate over r with the corner split at r = 1.
    const AngularPoint s1{1.0, 0.0, 2.0};
    auto f = [&g, alpha, s1](double r, double xi) {
      return g(r, xi, s1) * std::pow(r, -1.0 - alpha);
    };
    std::vector<Segment> segs;
    const double m = corner_peel_exponent(opts.corner_strength, 1);
    if (r_lo < 0.5) segs.push_back({[f](double r) { return f(r, r - 1.0); }, r_lo, 0.5});
    if (r_lo < 1.0) {
      const double a = std::max(r_lo, 0.5);
      segs.push_back({[f, m](double v) {
                        double xi = -std::pow(v, m);
                        if (xi == 0.0) return 0.0;
                        return f(1.0 + xi, xi) * m * std::pow(v, m - 1.0);
                      },
                      0.0, std::pow(1.0 - a, 1.0 / m)});
    }
    if (r_lo <= 1.0) {
      segs.push_back({[f, m](double v) {
                        double xi = std::pow(v, m);
                        if (xi == 0.0) return 0.0;
                        return f(1.0 + xi, xi) * m * std::pow(v, m - 1.0);
                      },
                      0.0, std::pow(0.5, 1.0 / m)});
    } else if (r_lo < 1.5) {
      segs.push_back({[f](double r) { return f(r, r - 1.0); }, r_lo, 1.5});
    }
    {
      const double L = std::max(r_lo, 1.5), e = 1.0 / alpha;
      segs.push_back({[f, L, e](double v) {
                        double r = L * std::pow(v, -e);
                        return f(r, r - 1.0) * L * e * std::pow(v, -e - 1.0);
                      },
                      0.0, 1.0});
    }
    return run_segments(std::move(segs), opts.abs_tol, opts.rel_tol, opts.max_cells);
  }

  // d >= 2: theta in (0, pi/2) with weight sin^{d-2}(theta). The (1, s=1)
  // kernel corner is integrated in Duffy (ray) coordinates with a radial
  // power peel; everywhere else plain 2D adaptive cubature suffices.
  auto weighted = [&g, d, alpha](double r, double xi, double theta) {
    double w = (d == 2) ? 1.0 : std::pow(std::sin(theta), d - 2);
    return g(r, xi, angular_from_theta(theta)) * w * std::pow(r, -1.0 - alpha);
  };

  const double theta_hi = 0.5 * M_PI;
  const double theta_c = 0.5;  // corner box height
  struct Piece {
    std::function<double(double, double)> f;
    double x0, x1, y0, y1;
  };
  std::vector<Piece> pieces;

  // Duffy triangles over {0 < |xi| < h, 0 < theta < theta_c} around the
  // corner, with lambda = h v^m peeling the ray-radial singularity.
  auto duffy = [&](double h, double sgn) {
    const double m = corner_peel_exponent(opts.corner_strength, d);
    const double slope = theta_c / h;
    // T1: theta = slope * |xi| * tau below the diagonal, |xi| = h v^m
    pieces.push_back({[weighted, h, m, sgn, slope](double v, double tau) {
                        const double lam = h * std::pow(v, m);
                        if (lam == 0.0) return 0.0;
                        const double jac = h * m * std::pow(v, m - 1.0) * slope * lam;
                        const double xi = sgn * lam;
                        return weighted(1.0 + xi, xi, slope * lam * tau) * jac;
                      },
                      0.0, 1.0, 0.0, 1.0});
    // T2: |xi| = (mu/slope) * tau above the diagonal, theta = mu = theta_c v^m
    pieces.push_back({[weighted, m, sgn, slope, theta_c](double v, double tau) {
                        const double mu = theta_c * std::pow(v, m);
                        if (mu == 0.0) return 0.0;
                        const double jac = theta_c * m * std::pow(v, m - 1.0) * mu / slope;
                        const double xi = sgn * (mu / slope) * tau;
                        return weighted(1.0 + xi, xi, mu) * jac;
                      },
                      0.0, 1.0, 0.0, 1.0});
  };

  if (r_lo <= 1.0) {
    if (r_lo < 0.5) {
      if (r_lo == 0.0) {
        const double m0 = std::ceil(2.0 / (2.0 - alpha)) + 1.0;
        pieces.push_back({[weighted, m0](double u, double th) {
                            double r = std::pow(u, m0);
                            return weighted(r, r - 1.0, th) * m0 * std::pow(u, m0 - 1.0);
                          },
                          0.0, std::pow(0.5, 1.0 / m0), 0.0, theta_hi});
      } else {
        pieces.push_back({[weighted](double r, double th) { return weighted(r, r - 1.0, th); },
                          r_lo, 0.5, 0.0, theta_hi});
      }
    }
    const double h_left = std::min(0.5, 1.0 - r_lo);
    if (h_left > 0.0) duffy(h_left, -1.0);
    duffy(0.5, +1.0);
    // strip above the corner box
    pieces.push_back({[weighted](double r, double th) { return weighted(r, r - 1.0, th); },
                      std::max(r_lo, 0.5), 1.5, theta_c, theta_hi});
  } else if (r_lo < 1.5) {
    pieces.push_back({[weighted](double r, double th) { return weighted(r, r - 1.0, th); },
                      r_lo, 1.5, 0.0, theta_hi});
  }
  // Tail r in (max(r_lo, 3/2), inf): r = L e^u turns the polynomially
  // decaying integrand into an exponentially decaying smooth one (kernels
  // grow at most logarithmically); the truncation remainder is added to the
  // error estimate below.
  const double L_tail = std::max(r_lo, 1.5);
  const double u_max = (std::log(100.0 / std::max(opts.abs_tol, 1e-14))) / alpha + 6.0 / alpha;
  {
    pieces.push_back({[weighted, L_tail](double u, double th) {
                        double r = L_tail * std::exp(u);
                        return weighted(r, r - 1.0, th) * r;  // dr = r du
                      },
                      0.0, u_max, 0.0, theta_hi});
  }

  QuadResult out;
  out.abs_error_estimate =
      80.0 * (1.0 + u_max) * std::exp(-alpha * u_max) / alpha;  // tail truncation
  out.converged = true;
  Quad2DOptions o2;
  o2.abs_tol = opts.abs_tol / static_cast<double>(pieces.size());
  o2.rel_tol = 0.0;
  o2.max_cells = std::max(64, opts.max_cells / static_cast<int>(pieces.size()));
  for (size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    QuadResult r = integrate2d(p.f, p.x0, p.x1, p.y0, p.y1, o2);
    if (std::getenv("JF_DEBUG_RS"))
      std::fprintf(stderr, "  rs piece %zu: val=%.12g err=%.2e ev=%ld conv=%d\n", i, r.value,
                   r.abs_error_estimate, r.evaluations, r.converged);
    out.value += r.value;
    out.abs_error_estimate += r.abs_error_estimate;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  }
  return out;
}

QuadResult integrate_compensated_smalljump(
    const std::function<double(double, const AngularPoint&)>& remainder, int d,
    double alpha, double tol) {
  if (d < 1) throw std::invalid_argument("integrate_compensated_smalljump: d < 1");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("integrate_compensated_smalljump: alpha outside (0,2)");
  auto angular = [&](double rho, bool absolute) {
    auto h = [&](const AngularPoint& ap) {
      double v = remainder(rho, ap);
      return absolute ? std::abs(v) : v;
    };
    return integrate_angular_full(h, d, 1e-300).value;
  };
  // contract probe: the angular-averaged |remainder| must scale at least
  // like rho^{1.5} between the two probe radii
  {
    const double a3 = angular(1e-3, true), a4 = angular(1e-4, true);
    const double floor_v = 1e-14 * (1.0 + std::abs(a3));
    if (a4 > floor_v && a4 > a3 * std::pow(10.0, -1.5))
      throw std::invalid_argument(
          "integrate_compensated_smalljump: integrand does not vanish like O(rho^2) at 0");
  }
  auto f = [&](double rho) {
    return angular(rho, false) * std::pow(rho, d - 1.0) * std::pow(rho, -(d + alpha));
  };
  QuadOptions o;
  o.abs_tol = tol;
  o.singular.push_back({0.0, 1.0 - alpha});
  return integrate(f, 0.0, 1.0, o);
}

}  // namespace jumpform
