// SPDX-License-Identifier: Apache-2.0
#include "jumpform/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "jumpform/generator.hpp"
#include "jumpform/quad.hpp"

namespace jumpform {

namespace {

constexpr double kWilsonZ = 1.959963984540054;

void wilson_interval(long hits, long n, double& lo, double& hi) {
  const double z2 = kWilsonZ * kWilsonZ;
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double hw = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  lo = std::max(0.0, center - hw);
  hi = std::min(1.0, center + hw);
}

void validate_common(const SimConfig& cfg) {
  if (cfg.model.kernel_variant != KernelVariant::stable_pair)
    throw std::invalid_argument("simulate: only the stable pair kernel is simulated");
  if (!(cfg.r_hit > 0.0) || !(cfg.r_hit < cfg.x0_norm))
    throw std::invalid_argument("simulate: need 0 < r_hit < |x0|");
  if (cfg.n_paths < 1) throw std::invalid_argument("simulate: n_paths >= 1");
  if (cfg.max_jumps < 1) throw std::invalid_argument("simulate: max_jumps >= 1");
}

// Envelope constants for the rejection sampler: a2(x)+a2(x+z) <=
// a2(x) (1 + 2^{2|q|} |z|^{2|q|}) on |z| >= 1, which splits into two Pareto
// components of indices alpha and alpha - 2|q|.
struct Envelope {
  double e;       // |q|
  double cB;      // 2^{2|q|}
  double wA, wB;  // component masses (up to the a2(x) omega factor)
  bool exact;     // q == 0: the proposal law is the target law
};

Envelope make_envelope(const ModelParams& m) {
  const double e = std::abs(m.q);
  if (!(m.alpha - 2.0 * e > 0.0))
    throw std::invalid_argument("sample_big_jump: rejection envelope needs |q| < alpha/2");
  Envelope env;
  env.e = e;
  env.cB = std::pow(2.0, 2.0 * e);
  env.wA = 1.0 / m.alpha;
  env.wB = env.cB / (m.alpha - 2.0 * e);
  env.exact = (m.q == 0.0);
  return env;
}

double propose_radius(const Envelope& env, const ModelParams& m, Philox4x32& rng) {
  const double u_comp = rng.uniform() * (env.wA + env.wB);
  const double u = rng.uniform();
  if (u_comp < env.wA) return std::pow(u, -1.0 / m.alpha);
  return std::pow(u, -1.0 / (m.alpha - 2.0 * env.e));
}

}  // namespace

double big_jump_rate(const ModelParams& m, double x_norm, double tol) {
  require_big_jump_ok(m);
  const Coefficients co = coefficients(m);
  const double X = x_norm;
  const double a2x = co.a2_t(X * X);
  const double direct = a2x * omega_sphere(m.d - 1) / m.alpha;
  const double pref = angular_prefactor(m.d);
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
      return co.a2_t(tp);
    };
    return pref * integrate_angular_full(h, m.d, 1e-300).value;
  };
  auto f = [&](double rho) { return inner(rho) * std::pow(rho, -1.0 - m.alpha); };
  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = 1e-9;
  o.tail_power = 1.0 + m.alpha - 2.0 * std::max(m.q, 0.0);
  if (X > 2.0) o.breakpoints = {X - 1.0, X, X + 1.0};
  QuadResult r = integrate(f, 1.0, std::numeric_limits<double>::infinity(), o);
  return direct + r.value;
}

double small_jump_eps_rate(const ModelParams& m, double x_norm, double eps, double tol) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("small_jump_eps_rate: eps outside (0,1)");
  const Coefficients co = coefficients(m);
  const double X = x_norm;
  const double a1x = co.a1_t(X * X);
  const double pref = angular_prefactor(m.d);
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
      return a1x + co.a1_t(tp);
    };
    return pref * integrate_angular_full(h, m.d, 1e-300).value;
  };
  auto f = [&](double rho) {
    return inner(rho) * std::pow(rho, m.d - 1.0) * std::pow(rho, -(m.d + m.alpha));
  };
  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = 1e-9;
  return integrate(f, eps, 1.0, o).value;
}

RadialCache::RadialCache(const std::function<double(double)>& f, double r_min,
                         double r_max, int points) {
  if (points < 8) throw std::invalid_argument("RadialCache: need >= 8 points");
  dy_ = (std::log(r_max) - std::log(r_min)) / (points - 1);
  // pad three nodes on each side so the requested range only sees
  // high-order interior stencils
  y0_ = std::log(r_min) - 3.0 * dy_;
  points += 6;
  z_.resize(points);
  for (int i = 0; i < points; ++i) z_[i] = std::log(f(std::exp(y0_ + i * dy_)));
  slope_.resize(points);
  for (int i = 0; i < points; ++i) {
    if (i >= 2 && i + 2 < points)  // fourth-order central difference
      slope_[i] = (-z_[i + 2] + 8.0 * z_[i + 1] - 8.0 * z_[i - 1] + z_[i - 2]) / (12.0 * dy_);
    else if (i == 0)
      slope_[i] = (z_[1] - z_[0]) / dy_;
    else if (i == points - 1)
      slope_[i] = (z_[i] - z_[i - 1]) / dy_;
    else
      slope_[i] = (z_[i + 1] - z_[i - 1]) / (2.0 * dy_);
  }
  for (int i = 3; i < points - 4; ++i) {  // held-out midpoints of the requested range
    const double r = std::exp(y0_ + (i + 0.5) * dy_);
    const double exact = f(r);
    validation_err_ =
        std::max(validation_err_, std::abs((*this)(r) - exact) / std::abs(exact));
  }
}

double RadialCache::operator()(double r) const {
  const double y = std::log(r);
  const int n = static_cast<int>(z_.size());
  double t = (y - y0_) / dy_;
  if (t <= 0.0) return std::exp(z_[0] + slope_[0] * (y - y0_));
  if (t >= n - 1)
    return std::exp(z_[n - 1] + slope_[n - 1] * (y - (y0_ + (n - 1) * dy_)));
  const int i = static_cast<int>(t);
  const double s = t - i;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double z =
      h00 * z_[i] + h10 * dy_ * slope_[i] + h01 * z_[i + 1] + h11 * dy_ * slope_[i + 1];
  return std::exp(z);
}

SignedRadialCache::SignedRadialCache(const std::function<double(double)>& f, double r_min,
                                     double r_max, int points, double norm_pow)
    : norm_pow_(norm_pow) {
  if (points < 8) throw std::invalid_argument("SignedRadialCache: need >= 8 points");
  dy_ = (std::log(r_max) - std::log(r_min)) / (points - 1);
  y0_ = std::log(r_min) - 3.0 * dy_;
  points += 6;
  w_.resize(points);
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(y0_ + i * dy_);
    w_[i] = f(r) * std::pow(1.0 + r * r, norm_pow_);
  }
  slope_.resize(points);
  for (int i = 0; i < points; ++i) {
    if (i >= 2 && i + 2 < points)
      slope_[i] = (-w_[i + 2] + 8.0 * w_[i + 1] - 8.0 * w_[i - 1] + w_[i - 2]) / (12.0 * dy_);
    else if (i == 0)
      slope_[i] = (w_[1] - w_[0]) / dy_;
    else if (i == points - 1)
      slope_[i] = (w_[i] - w_[i - 1]) / dy_;
    else
      slope_[i] = (w_[i + 1] - w_[i - 1]) / (2.0 * dy_);
  }
  double wmax = 0.0;
  for (double w : w_) wmax = std::max(wmax, std::abs(w));
  for (int i = 3; i < points - 4; ++i) {
    const double r = std::exp(y0_ + (i + 0.5) * dy_);
    const double exact = f(r) * std::pow(1.0 + r * r, norm_pow_);
    const double interp = (*this)(r) * std::pow(1.0 + r * r, norm_pow_);
    validation_err_ = std::max(validation_err_, std::abs(interp - exact) / wmax);
  }
}

double SignedRadialCache::operator()(double r) const {
  const double y = std::log(r);
  const int n = static_cast<int>(w_.size());
  double t = std::clamp((y - y0_) / dy_, 0.0, n - 1.0);
  int i = std::min(static_cast<int>(t), n - 2);
  const double s = t - i;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double w =
      h00 * w_[i] + h10 * dy_ * slope_[i] + h01 * w_[i + 1] + h11 * dy_ * slope_[i + 1];
  return w * std::pow(1.0 + r * r, -norm_pow_);
}

double sample_big_jump_1d(double x, const ModelParams& m, Philox4x32& rng) {
  const Envelope env = make_envelope(m);
  if (env.exact) {
    const double rho = std::pow(rng.uniform(), -1.0 / m.alpha);
    return (rng.next_u32() & 1u) ? rho : -rho;
  }
  const double a2x = std::pow(1.0 + x * x, m.q);
  for (int it = 0; it < 1000000; ++it) {
    const double rho = propose_radius(env, m, rng);
    const double z = (rng.next_u32() & 1u) ? rho : -rho;
    const double y = x + z;
    const double accept = (a2x + std::pow(1.0 + y * y, m.q)) /
                          (a2x * (1.0 + env.cB * std::pow(rho, 2.0 * env.e)));
    if (rng.uniform() <= accept) return z;
  }
  throw std::runtime_error("sample_big_jump: rejection cap hit (envelope bug?)");
}

std::vector<double> sample_big_jump(std::span<const double> x, const ModelParams& m,
                                    Philox4x32& rng) {
  const int d = m.d;
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("sample_big_jump: dimension mismatch");
  if (d == 1) return {sample_big_jump_1d(x[0], m, rng)};
  const Envelope env = make_envelope(m);
  const double a2x = std::pow(1.0 + norm2(x), m.q);
  std::vector<double> z(d), y(d);
  for (int it = 0; it < 1000000; ++it) {
    const double rho = propose_radius(env, m, rng);
    double nz = 0.0;
    for (int k = 0; k < d; ++k) {
      z[k] = rng.normal();
      nz += z[k] * z[k];
    }
    nz = std::sqrt(nz);
    for (int k = 0; k < d; ++k) z[k] *= rho / nz;
    if (env.exact) return z;
    double ny2 = 0.0;
    for (int k = 0; k < d; ++k) {
      y[k] = x[k] + z[k];
      ny2 += y[k] * y[k];
    }
    const double accept = (a2x + std::pow(1.0 + ny2, m.q)) /
                          (a2x * (1.0 + env.cB * std::pow(rho, 2.0 * env.e)));
    if (rng.uniform() <= accept) return z;
  }
  throw std::runtime_error("sample_big_jump: rejection cap hit (envelope bug?)");
}

namespace {

struct PathOutcome {
  uint8_t hit = 0;
  uint8_t overrun = 0;
  long jumps = 0;
  double t_end = 0.0;
  double psi_end = 0.0;  // dynkin variant only
  double lpsi_integral = 0.0;
};

struct PathContext {
  const SimConfig* cfg;
  const RadialCache* rate;
  const SignedRadialCache* lpsi;  // L2 psi along the path range
  double delta = 0.0;
  double t_star = std::numeric_limits<double>::infinity();
  bool dynkin = false;
};

// One big-jump path: wait Exp(rate(x)), jump, test the closed ball (the
// trajectory is piecewise constant, so hitting is the post-jump state). The
// Dynkin variant accumulates the exact time integral of L2 psi.
PathOutcome run_path_1d(const PathContext& ctx, uint64_t path_index) {
  const SimConfig& cfg = *ctx.cfg;
  Philox4x32 rng(cfg.seed, path_index);
  double x = cfg.x0_norm, t = 0.0;
  PathOutcome out;
  PsiDelta psi(ctx.dynkin ? ctx.delta : 0.5);
  const double t_limit = std::min(cfg.t_max, ctx.t_star);
  for (long j = 0; j < cfg.max_jumps; ++j) {
    const double rate = (*ctx.rate)(std::abs(x));
    const double tau = rng.exponential() / rate;
    if (t + tau >= t_limit) {
      if (ctx.dynkin) {
        out.lpsi_integral += (*ctx.lpsi)(std::abs(x)) * (t_limit - t);
        out.psi_end = psi.value_t(x * x);
      }
      out.t_end = t_limit;
      out.jumps = j;
      return out;
    }
    if (ctx.dynkin) out.lpsi_integral += (*ctx.lpsi)(std::abs(x)) * tau;
    t += tau;
    x += sample_big_jump_1d(x, cfg.model, rng);
    if (std::abs(x) <= cfg.r_hit) {
      out.hit = 1;
      out.t_end = t;
      out.jumps = j + 1;
      if (ctx.dynkin) out.psi_end = psi.value_t(x * x);
      return out;
    }
  }
  out.t_end = t;
  out.jumps = cfg.max_jumps;
  out.overrun = 1;
  if (ctx.dynkin) out.psi_end = psi.value_t(x * x);
  return out;
}

PathOutcome run_path_nd(const PathContext& ctx, uint64_t path_index) {
  const SimConfig& cfg = *ctx.cfg;
  Philox4x32 rng(cfg.seed, path_index);
  const int d = cfg.model.d;
  std::vector<double> x(d, 0.0);
  x[0] = cfg.x0_norm;
  double t = 0.0;
  PathOutcome out;
  PsiDelta psi(ctx.dynkin ? ctx.delta : 0.5);
  const double t_limit = std::min(cfg.t_max, ctx.t_star);
  for (long j = 0; j < cfg.max_jumps; ++j) {
    const double xn = norm(x);
    const double rate = (*ctx.rate)(xn);
    const double tau = rng.exponential() / rate;
    if (t + tau >= t_limit) {
      if (ctx.dynkin) {
        out.lpsi_integral += (*ctx.lpsi)(xn) * (t_limit - t);
        out.psi_end = psi.value_t(xn * xn);
      }
      out.t_end = t_limit;
      out.jumps = j;
      return out;
    }
    if (ctx.dynkin) out.lpsi_integral += (*ctx.lpsi)(xn) * tau;
    t += tau;
    std::vector<double> z = sample_big_jump(x, cfg.model, rng);
    for (int k = 0; k < d; ++k) x[k] += z[k];
    const double nx = norm(x);
    if (nx <= cfg.r_hit) {
      out.hit = 1;
      out.t_end = t;
      out.jumps = j + 1;
      if (ctx.dynkin) out.psi_end = psi.value_t(nx * nx);
      return out;
    }
  }
  out.t_end = t;
  out.jumps = cfg.max_jumps;
  out.overrun = 1;
  if (ctx.dynkin) out.psi_end = psi.value_t(norm2(x));
  return out;
}

std::vector<PathOutcome> run_all_paths(const PathContext& ctx) {
  const SimConfig& cfg = *ctx.cfg;
  std::vector<PathOutcome> outcomes(cfg.n_paths);
  const int threads = std::max(1, cfg.threads);
  auto work = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i)
      outcomes[i] = (cfg.model.d == 1) ? run_path_1d(ctx, i) : run_path_nd(ctx, i);
  };
  if (threads == 1) {
    work(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (cfg.n_paths + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const long lo = t * chunk, hi = std::min<long>(cfg.n_paths, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return outcomes;
}

RadialCache make_rate_cache(const ModelParams& m, double r_min) {
  return RadialCache([&](double r) { return big_jump_rate(m, r, 1e-10); },
                     std::max(1e-6, 0.5 * r_min), 1e12, 420);
}

}  // namespace

HittingEstimate run_big_jump_paths(const SimConfig& cfg, double delta_ref,
                                   const std::string* event_csv, long logged_paths) {
  validate_common(cfg);
  require_big_jump_ok(cfg.model);
  RadialCache rate = make_rate_cache(cfg.model, cfg.r_hit);
  if (rate.max_validation_rel_error() > 1e-6)
    throw std::runtime_error("run_big_jump_paths: rate cache interpolation above 1e-6");
  PathContext ctx{&cfg, &rate, nullptr, 0.0, std::numeric_limits<double>::infinity(), false};
  std::vector<PathOutcome> outs = run_all_paths(ctx);

  HittingEstimate est;
  est.n_paths = cfg.n_paths;
  est.delta_ref = delta_ref;
  double jump_sum = 0.0;
  for (const auto& o : outs) {
    est.hits += o.hit;
    est.censored += (o.hit == 0);
    jump_sum += static_cast<double>(o.jumps);
  }
  est.freq = static_cast<double>(est.hits) / est.n_paths;
  est.mean_jumps = jump_sum / est.n_paths;
  wilson_interval(est.hits, est.n_paths, est.ci_low, est.ci_high);
  est.theory_bound =
      std::pow((1.0 + cfg.r_hit * cfg.r_hit) / (1.0 + cfg.x0_norm * cfg.x0_norm), delta_ref);

  if (event_csv != nullptr && cfg.model.d == 1) {
    // replay the first few streams and log the events
    std::ofstream csv(*event_csv);
    csv << "path,time,x_norm,jump_norm\r\n";
    csv.precision(17);
    const long n_log = std::min<long>(logged_paths, cfg.n_paths);
    for (long i = 0; i < n_log; ++i) {
      Philox4x32 rng(cfg.seed, i);
      double x = cfg.x0_norm, t = 0.0;
      for (long j = 0; j < cfg.max_jumps; ++j) {
        const double r = rate(std::abs(x));
        const double tau = rng.exponential() / r;
        if (t + tau >= cfg.t_max) break;
        t += tau;
        const double z = sample_big_jump_1d(x, cfg.model, rng);
        x += z;
        csv << i << "," << t << "," << std::abs(x) << "," << std::abs(z) << "\r\n";
        if (std::abs(x) <= cfg.r_hit) break;
      }
    }
  }
  return est;
}

DynkinResidual dynkin_check(const SimConfig& cfg, double delta, double t_star) {
  validate_common(cfg);
  require_big_jump_ok(cfg.model);
  if (!(delta > 0.0)) throw std::invalid_argument("dynkin_check: delta > 0 required");
  const double psi0 = std::pow(1.0 + cfg.x0_norm * cfg.x0_norm, -delta);
  if (t_star == 0.0)  // both sides equal psi(x0) exactly
    return DynkinResidual{0.0, psi0, psi0, 0.0, 0.0, cfg.n_paths, 0};

  RadialCache rate = make_rate_cache(cfg.model, cfg.r_hit);
  PsiDelta psi(delta);
  // L2 psi normalized by (1+r^2)^{alpha/2-q+delta} is bounded and smooth
  // (it converges to the limit functional value as r grows).
  SignedRadialCache lpsi([&](double r) { return apply_L2(psi, r, cfg.model, 1e-11); },
                         std::max(1e-6, 0.5 * cfg.r_hit), 1e12, 420,
                         0.5 * cfg.model.alpha - cfg.model.q + delta);
  if (rate.max_validation_rel_error() > 1e-6 || lpsi.max_validation_rel_error() > 1e-6)
    throw std::runtime_error("dynkin_check: cache interpolation above 1e-6");

  PathContext ctx{&cfg, &rate, &lpsi, delta, t_star, true};
  std::vector<PathOutcome> outs = run_all_paths(ctx);

  double mean_y = 0.0, mean_lhs = 0.0, mean_int = 0.0;
  long overruns = 0;
  for (const auto& o : outs) {
    mean_y += o.psi_end - o.lpsi_integral;
    mean_lhs += o.psi_end;
    mean_int += o.lpsi_integral;
    overruns += o.overrun;
  }
  mean_y /= cfg.n_paths;
  mean_lhs /= cfg.n_paths;
  mean_int /= cfg.n_paths;
  double var = 0.0;
  for (const auto& o : outs) {
    const double y = o.psi_end - o.lpsi_integral;
    var += (y - mean_y) * (y - mean_y);
  }
  var /= (cfg.n_paths - 1);

  DynkinResidual res;
  res.t_star = t_star;
  res.lhs = mean_lhs;
  res.rhs = psi0 + mean_int;
  res.residual = res.lhs - res.rhs;
  res.se = std::sqrt(var / cfg.n_paths);
  res.n_paths = cfg.n_paths;
  res.budget_overruns = overruns;
  return res;
}

namespace {

// Small-jump epsilon chain: kernel eps < |z| < 1, no compensator drift.
HittingEstimate run_small_eps(const SimConfig& cfg, double eps, double delta_ref) {
  const ModelParams& m = cfg.model;
  if (m.p > 1.0) throw std::invalid_argument("small-jump scheme requires p <= 1");
  RadialCache rate([&](double r) { return small_jump_eps_rate(m, r, eps, 1e-10); },
                   std::max(1e-6, 0.25 * cfg.r_hit), 1e9, 300);
  if (rate.max_validation_rel_error() > 1e-6)
    throw std::runtime_error("small-jump rate cache interpolation above 1e-6");
  const double env_const = 1.0 + std::pow(2.0, 2.0 * std::abs(m.p));
  const double ieps = std::pow(eps, -m.alpha);
  const int d = m.d;

  HittingEstimate est;
  est.n_paths = cfg.n_paths;
  est.delta_ref = delta_ref;
  double jump_sum = 0.0;
  std::vector<double> x(d), z(d), y(d);
  for (long i = 0; i < cfg.n_paths; ++i) {
    Philox4x32 rng(cfg.seed, i);
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = cfg.x0_norm;
    double t = 0.0;
    bool hit = false;
    long j = 0;
    for (; j < cfg.max_jumps; ++j) {
      const double xn = norm(x);
      const double tau = rng.exponential() / rate(xn);
      if (t + tau >= cfg.t_max) break;
      t += tau;
      const double a1x = std::pow(1.0 + xn * xn, m.p);
      bool accepted = false;
      for (int it = 0; it < 1000000 && !accepted; ++it) {
        const double u = rng.uniform();
        const double rho = std::pow(ieps - u * (ieps - 1.0), -1.0 / m.alpha);
        if (d == 1) {
          z[0] = (rng.next_u32() & 1u) ? rho : -rho;
        } else {
          double nz = 0.0;
          for (int k = 0; k < d; ++k) {
            z[k] = rng.normal();
            nz += z[k] * z[k];
          }
          nz = std::sqrt(nz);
          for (int k = 0; k < d; ++k) z[k] *= rho / nz;
        }
        double ny2 = 0.0;
        for (int k = 0; k < d; ++k) {
          y[k] = x[k] + z[k];
          ny2 += y[k] * y[k];
        }
        const double accept = (a1x + std::pow(1.0 + ny2, m.p)) / (a1x * env_const);
        if (rng.uniform() <= accept) accepted = true;
      }
      if (!accepted) throw std::runtime_error("small-jump sampler: rejection cap hit");
      for (int k = 0; k < d; ++k) x[k] = y[k];
      if (norm(x) <= cfg.r_hit) {
        hit = true;
        ++j;
        break;
      }
    }
    est.hits += hit;
    est.censored += !hit;
    jump_sum += static_cast<double>(j);
  }
  est.freq = static_cast<double>(est.hits) / est.n_paths;
  est.mean_jumps = jump_sum / est.n_paths;
  wilson_interval(est.hits, est.n_paths, est.ci_low, est.ci_high);
  est.theory_bound =
      std::pow((1.0 + cfg.r_hit * cfg.r_hit) / (1.0 + cfg.x0_norm * cfg.x0_norm), delta_ref);
  return est;
}

}  // namespace

SmallJumpEpsReport run_small_jump_paths_eps(const SimConfig& cfg, double delta_ref) {
  validate_common(cfg);
  if (!(cfg.epsilon_cutoff > 0.0 && cfg.epsilon_cutoff < 1.0))
    throw std::invalid_argument("run_small_jump_paths_eps: epsilon_cutoff outside (0,1)");
  SmallJumpEpsReport rep;
  rep.at_eps = run_small_eps(cfg, cfg.epsilon_cutoff, delta_ref);
  rep.at_half_eps = run_small_eps(cfg, 0.5 * cfg.epsilon_cutoff, delta_ref);
  rep.bias_indicator = std::abs(rep.at_eps.freq - rep.at_half_eps.freq);
  return rep;
}

McEstimate mc_generator_estimate_eps(const RadialC2& u, double x_norm,
                                     const ModelParams& m, double eps, double h,
                                     long n_samples, uint64_t seed) {
  if (m.d != 1)
    throw std::invalid_argument("mc_generator_estimate_eps: implemented for d = 1");
  const double rate0 = small_jump_eps_rate(m, x_norm, eps, 1e-10);
  const double env_const = 1.0 + std::pow(2.0, 2.0 * std::abs(m.p));
  const double ieps = std::pow(eps, -m.alpha);
  const double u0 = u.value_t(x_norm * x_norm);
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    Philox4x32 rng(seed, i);
    double x = x_norm, t = 0.0, rate = rate0;
    while (true) {
      const double tau = rng.exponential() / rate;
      if (t + tau >= h) break;
      t += tau;
      const double a1x = std::pow(1.0 + x * x, m.p);
      double z = 0.0;
      for (bool accepted = false; !accepted;) {
        const double uu = rng.uniform();
        const double rho = std::pow(ieps - uu * (ieps - 1.0), -1.0 / m.alpha);
        z = (rng.next_u32() & 1u) ? rho : -rho;
        const double yv = x + z;
        const double accept = (a1x + std::pow(1.0 + yv * yv, m.p)) / (a1x * env_const);
        if (rng.uniform() <= accept) accepted = true;
      }
      x += z;
      rate = small_jump_eps_rate(m, std::abs(x), eps, 1e-8);
    }
    const double yv = (u.value_t(x * x) - u0) / h;
    const double dm = yv - mean;
    mean += dm / (i + 1);
    m2 += dm * (yv - mean);
  }
  const double var = m2 / (n_samples - 1);
  return McEstimate{mean, std::sqrt(var / n_samples)};
}

double big_jump_radial_cdf(const ModelParams& m, double x_norm, double t, double rate,
                           double tol) {
  if (t <= 1.0) return 0.0;
  const Coefficients co = coefficients(m);
  const double X = x_norm;
  const double a2x = co.a2_t(X * X);
  const double pref = angular_prefactor(m.d);
  auto inner = [&](double rho) {
    auto h = [&](const AngularPoint& ap) {
      const double tp = (X - rho) * (X - rho) + 2.0 * X * rho * ap.one_plus_s;
      return a2x + co.a2_t(tp);
    };
    return pref * integrate_angular_full(h, m.d, 1e-300).value;
  };
  auto f = [&](double rho) { return inner(rho) * std::pow(rho, -1.0 - m.alpha); };
  QuadOptions o;
  o.abs_tol = tol;
  o.rel_tol = 1e-9;
  if (X > 2.0 && X < t) o.breakpoints = {X - 1.0, X, X + 1.0};
  QuadResult r = integrate(f, 1.0, t, o);
  return r.value / rate;
}

std::string HittingEstimate::to_json() const {
  nlohmann::json j;
  j["hits"] = hits;
  j["n_paths"] = n_paths;
  j["freq"] = freq;
  j["ci_low"] = ci_low;
  j["ci_high"] = ci_high;
  j["theory_bound"] = theory_bound;
  j["delta_ref"] = delta_ref;
  j["censored"] = censored;
  j["mean_jumps"] = mean_jumps;
  return j.dump(2);
}

std::string DynkinResidual::to_json() const {
  nlohmann::json j;
  j["t_star"] = t_star;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["residual"] = residual;
  j["se"] = se;
  j["n_paths"] = n_paths;
  j["budget_overruns"] = budget_overruns;
  return j.dump(2);
}

std::string SmallJumpEpsReport::to_json() const {
  nlohmann::json j;
  j["at_eps"] = nlohmann::json::parse(at_eps.to_json());
  j["at_half_eps"] = nlohmann::json::parse(at_half_eps.to_json());
  j["bias_indicator"] = bias_indicator;
  return j.dump(2);
}

}  // namespace jumpform
