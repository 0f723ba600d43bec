// SPDX-License-Identifier: Apache-2.0
#include "jumpform/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "jumpform/quad.hpp"

namespace jumpform {

double RadialBound::operator()(double r) const {
  double v = c * std::pow(1.0 + r, growth);
  if (log_pow != 0.0) v *= std::pow(std::log(2.0 + r), log_pow);
  if (loglog_pow != 0.0) v *= std::pow(std::log(std::log(3.0 + r)), loglog_pow);
  return v;
}

RecurrenceInput recurrence_input_from_model(const ModelParams& m) {
  RecurrenceInput in;
  in.model = m;
  in.a1 = [p = m.p](double r) { return std::pow(1.0 + r * r, p); };
  in.a2 = [q = m.q](double r) { return std::pow(1.0 + r * r, q); };
  in.a2_tail_growth = 2.0 * m.q;
  return in;
}

void set_boundary_growth_coefficients(RecurrenceInput& in, bool critical_big_index) {
  const int d = in.model.d;
  in.a1 = [b = RadialBound{1.0, 2.0 - d, 1.0, 0.0}](double r) { return b(r); };
  if (in.model.kernel_variant == KernelVariant::log_perturbed) {
    in.a2 = [b = RadialBound{1.0, -static_cast<double>(d), in.model.beta, 0.0}](double r) {
      return b(r);
    };
    in.a2_tail_growth = -static_cast<double>(d);
    return;
  }
  if (critical_big_index) {
    in.a2 = [b = RadialBound{1.0, 2.0 - d, 0.0, 1.0}](double r) { return b(r); };
    in.a2_tail_growth = 2.0 - d;
  } else {
    const double g = std::min(in.model.beta, 2.0) - d;
    in.a2 = [b = RadialBound{1.0, g, 1.0, 0.0}](double r) { return b(r); };
    in.a2_tail_growth = g;
  }
}

namespace {

// Decay power of b^{d-1} a2(b) f_big(b): the tail transform exponent of every
// big-jump tail integral below. Slowly varying corrections are absorbed by a
// small slack.
double big_tail_power(const RecurrenceInput& in) {
  double p;
  if (in.model.kernel_variant == KernelVariant::stable_pair)
    p = 1.0 + in.model.beta - in.a2_tail_growth;
  else
    p = 1.0 - in.a2_tail_growth;
  if (!(p > 1.05))
    throw std::invalid_argument("recurrence: big-jump tail integral diverges (a2 grows too fast)");
  return p - 0.02;  // slack for log factors
}

double ball_coefficient_integral(const std::function<double(double)>& a, int d, double s,
                                 double tol) {
  auto f = [&](double t) { return a(t) * std::pow(t, d - 1.0); };
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = tol;
  return omega_sphere(d - 1) * integrate(f, 0.0, s, o).value;
}

double m0_value(const RecurrenceInput& in, double r, double tol) {
  if (!in.has_diffusion) return 0.0;
  auto f = [&](double t) { return in.diffusion_bound(t) * std::pow(t, in.model.d - 1.0); };
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = tol;
  return 2.0 * omega_sphere(in.model.d - 1) * integrate(f, 0.0, r, o).value;
}

// Angular reduction of the two-part kernel between radii a and b:
// int (coef) nu(l) dsigma(s), with l^2 = a^2 + b^2 - 2 a b s and the
// coefficient a1(a)+a1(b) on l < 1, a2(a)+a2(b) on l >= 1.
double pair_kernel(const RecurrenceInput& in, double a, double b, double tol) {
  const LevyKernel nu = levy_kernel(in.model);
  const double c1 = in.a1(a) + in.a1(b);
  const double c2 = in.a2(a) + in.a2(b);
  const int d = in.model.d;
  if (d == 1) {
    const double l1 = std::abs(a - b), l2 = a + b;
    auto k = [&](double l) {
      return l < 1.0 ? c1 * nu.small_density(l) : c2 * nu.big_density(l);
    };
    return k(l1) + k(l2);
  }
  auto h = [&](const AngularPoint& ap) {
    const double l2 = (a - b) * (a - b) + 2.0 * a * b * ap.one_minus_s;
    const double l = std::sqrt(l2);
    return l < 1.0 ? c1 * nu.small_density(l) : c2 * nu.big_density(l);
  };
  std::vector<double> breaks;
  const double sstar = (a * a + b * b - 1.0) / (2.0 * a * b);
  if (sstar > -1.0 && sstar < 1.0) breaks.push_back(sstar);
  return angular_prefactor(d) * integrate_angular_full(h, d, tol, breaks).value;
}

}  // namespace

MFunctionals m_functionals(const RecurrenceInput& in, double r, double R, double tol) {
  if (!(0.0 < r && r < R)) throw std::invalid_argument("m_functionals: need 0 < r < R");
  const int d = in.model.d;
  const double alpha = in.model.alpha;
  MFunctionals out;
  out.M0 = m0_value(in, r, 1e-10);

  // M1: |x-y|^2 against the kernel over B(r) x B(r)
  auto m1_inner = [&](double a) {
    auto fb = [&](double b) {
      // angular integral of l^2 kernel
      const LevyKernel nu = levy_kernel(in.model);
      const double c1 = in.a1(a) + in.a1(b);
      const double c2 = in.a2(a) + in.a2(b);
      if (d == 1) {
        auto k = [&](double l) {
          return l * l * (l < 1.0 ? c1 * nu.small_density(l) : c2 * nu.big_density(l));
        };
        return (k(std::abs(a - b)) + k(a + b)) * std::pow(b, d - 1.0);
      }
      auto h = [&](const AngularPoint& ap) {
        const double l2 = (a - b) * (a - b) + 2.0 * a * b * ap.one_minus_s;
        const double l = std::sqrt(l2);
        return l2 * (l < 1.0 ? c1 * nu.small_density(l) : c2 * nu.big_density(l));
      };
      std::vector<double> breaks;
      const double sstar = (a * a + b * b - 1.0) / (2.0 * a * b);
      if (sstar > -1.0 && sstar < 1.0) breaks.push_back(sstar);
      return angular_prefactor(d) * integrate_angular_full(h, d, tol * 1e-2, breaks).value *
             std::pow(b, d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol * 0.1;
    o.singular.push_back({a, 2.0 - alpha});
    for (double brk : {a - 1.0, a + 1.0})
      if (brk > 0.0 && brk < r) o.breakpoints.push_back(brk);
    return integrate(fb, 0.0, r, o).value;
  };
  {
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    auto fa = [&](double a) { return m1_inner(a) * std::pow(a, d - 1.0); };
    out.M1 = omega_sphere(d - 1) * integrate(fa, 0.0, r, o).value;
  }

  // M2: log(|y|/R) over B(r) x B(R)^c
  const double tp = big_tail_power(in);
  auto m2_inner = [&](double a) {
    auto fb = [&](double b) {
      return pair_kernel(in, a, b, tol * 1e-2) * std::log(b / R) * std::pow(b, d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol * 0.1;
    o.tail_power = tp;
    return integrate(fb, R, std::numeric_limits<double>::infinity(), o).value;
  };
  {
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    auto fa = [&](double a) { return m2_inner(a) * std::pow(a, d - 1.0); };
    out.M2 = omega_sphere(d - 1) * integrate(fa, 0.0, r, o).value;
  }
  return out;
}

NTerms n_of_s(const RecurrenceInput& in, double s, double tol) {
  if (!(s >= 1.0)) throw std::invalid_argument("n_of_s: s >= 1 required");
  const int d = in.model.d;
  const LevyKernel nu = levy_kernel(in.model);
  const double om = omega_sphere(d - 1);
  const double tp = big_tail_power(in);

  NTerms t{};
  t.small_part = ball_coefficient_integral(in.a1, d, s, tol) / (s * s);

  double moment = 0.0;
  if (s > 1.0) {
    auto f1 = [&](double rho) { return rho * rho * nu.big_density(rho) * std::pow(rho, d - 1.0); };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    moment = integrate(f1, 1.0, s, o).value / (s * s);
  }
  double logtail;
  {
    auto f2 = [&](double rho) {
      return std::log(rho / s) * nu.big_density(rho) * std::pow(rho, d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    if (in.model.kernel_variant == KernelVariant::stable_pair) {
      o.tail_power = 1.0 + in.model.beta - 0.02;
      logtail = integrate(f2, s, std::numeric_limits<double>::infinity(), o).value;
    } else {
      // rho^{-1} log^{-(beta+2)} tail: polynomial decay only in u = log rho
      auto fu = [&](double u) {
        const double rho = std::exp(u);
        return f2(rho) * rho;
      };
      o.tail_power = 1.0 + in.model.beta - 0.02;
      logtail = integrate(fu, std::log(s), std::numeric_limits<double>::infinity(), o).value;
    }
  }
  t.big_inner = ball_coefficient_integral(in.a2, d, s, tol) * om * (moment + logtail);

  {
    auto f3 = [&](double rho) {
      return in.a2(rho) * std::log(rho / s) * nu.big_density(rho) * std::pow(rho, d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    o.tail_power = tp;
    t.big_tail =
        std::pow(s, d) * om * integrate(f3, s, std::numeric_limits<double>::infinity(), o).value;
  }
  t.local_part = m0_value(in, s, 1e-9) / (s * s);
  t.total = t.small_part + t.big_inner + t.big_tail + t.local_part;
  return t;
}

double SlowlyVaryingL::operator()(double s) const {
  switch (family) {
    case LFamily::log_family:
      return c * std::log(2.0 + s);
    case LFamily::log_loglog:
      return c * std::log(2.0 + s) * std::log(std::log(3.0 + s));
    case LFamily::power:
      return c * std::pow(s, kappa);
  }
  return c;
}

std::string SlowlyVaryingL::name() const {
  switch (family) {
    case LFamily::log_family:
      return "log";
    case LFamily::log_loglog:
      return "log_loglog";
    case LFamily::power:
      return "power(" + std::to_string(kappa) + ")";
  }
  return "?";
}

SlowlyVaryingL fit_L(const RecurrenceInput& in, LFamily family, double kappa,
                     const std::vector<double>& s_grid) {
  SlowlyVaryingL L{family, 1.0, kappa};
  double c = 0.0;
  for (double s : s_grid) c = std::max(c, n_of_s(in, s).total / L(s));
  L.c = c;
  return L;
}

std::string verdict_name(IntegralVerdict v) {
  switch (v) {
    case IntegralVerdict::diverges_numerically:
      return "diverges_numerically";
    case IntegralVerdict::converges_numerically:
      return "converges_numerically";
    case IntegralVerdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

IntegralTestReport integral_test(const SlowlyVaryingL& L, double r0, double s_max) {
  if (!(r0 > 1.0)) throw std::invalid_argument("integral_test: r0 > 1 required");
  IntegralTestReport rep;
  rep.partial_integral = 0.0;
  // decade increments int ds/(s L(s)) = int du / L(e^u) on u in [j ln10, (j+1) ln10]
  double lo = r0;
  std::vector<double> ds;
  for (double hi = std::pow(10.0, std::ceil(std::log10(r0))); lo < s_max;
       hi = std::min(hi * 10.0, s_max)) {
    if (hi <= lo) {
      hi = lo * 10.0;
      continue;
    }
    auto f = [&](double u) { return 1.0 / L(std::exp(u)); };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = 1e-10;
    double inc = integrate(f, std::log(lo), std::log(hi), o).value;
    ds.push_back(inc);
    rep.partial_integral += inc;
    lo = hi;
    if (hi >= s_max) break;
  }
  rep.decade_increments = ds;
  const size_t n = ds.size();
  if (n < 6) {
    rep.verdict = IntegralVerdict::inconclusive;
    return rep;
  }
  const size_t w0 = n > 9 ? n - 8 : 1;  // analysis window: the late decades

  // Geometric decay with flat ratios: the tail is summable.
  {
    double log_geo = 0.0;
    double r_first = ds[w0 + 1] / ds[w0], r_last = 0.0, r_max = 0.0;
    int cnt = 0;
    for (size_t j = w0; j + 1 < n; ++j) {
      const double r = ds[j + 1] / ds[j];
      log_geo += std::log(r);
      r_max = std::max(r_max, r);
      r_last = r;
      ++cnt;
    }
    const double geo = std::exp(log_geo / cnt);
    if (geo <= 0.90 && r_max <= 0.95 && r_last - r_first <= 0.02) {
      rep.verdict = IntegralVerdict::converges_numerically;
      return rep;
    }
  }

  // Harmonic-compatible decay: 1/D_j (optionally log-corrected) close to a
  // straight increasing line in the decade index means D_j ~ 1/(a + b j),
  // whose sum grows without bound along the grid.
  auto harmonic_fit = [&](bool log_corrected) {
    std::vector<double> xs, ys;
    for (size_t j = w0; j < n; ++j) {
      double y = 1.0 / ds[j];
      if (log_corrected) y /= std::log(j + 2.0);
      xs.push_back(static_cast<double>(j));
      ys.push_back(y);
    }
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
    const double slope = sxy / sxx, icept = my - mx * slope;
    if (slope <= 0.0) return false;
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      const double fit = icept + slope * xs[i];
      worst = std::max(worst, std::abs(ys[i] - fit) / std::abs(fit));
    }
    return worst <= 0.02;
  };
  if (harmonic_fit(false) || harmonic_fit(true))
    rep.verdict = IntegralVerdict::diverges_numerically;
  else
    rep.verdict = IntegralVerdict::inconclusive;
  return rep;
}

std::string IntegralTestReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict_name(verdict);
  j["decade_increments"] = decade_increments;
  j["partial_integral"] = partial_integral;
  return j.dump(2);
}

double radial_form_energy(const RecurrenceInput& in,
                          const std::function<double(double)>& profile, double support_hi,
                          const std::vector<double>& profile_breaks, double tol) {
  const int d = in.model.d;
  const double alpha = in.model.alpha;
  const double tp = big_tail_power(in);

  auto inner_b = [&](double a) {
    const double ga = profile(a);
    auto fb = [&](double b) {
      const double diff = ga - profile(b);
      if (diff == 0.0) return 0.0;
      return diff * diff * pair_kernel(in, a, b, tol * 1e-2) * std::pow(b, d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol * 0.1;
    o.tail_power = tp;
    o.singular.push_back({a, 3.0 - alpha});  // (G(a)-G(b))^2 ~ (a-b)^2 against l^{-1-alpha}
    for (double brk : profile_breaks)
      if (brk > 0.0) o.breakpoints.push_back(brk);
    for (double brk : {a - 1.0, a + 1.0})
      if (brk > 0.0) o.breakpoints.push_back(brk);
    return integrate(fb, 0.0, std::numeric_limits<double>::infinity(), o).value;
  };
  QuadOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = tol;
  o.tail_power = tp;
  for (double brk : profile_breaks)
    if (brk > 0.0) o.breakpoints.push_back(brk);
  auto fa = [&](double a) { return inner_b(a) * std::pow(a, d - 1.0); };
  (void)support_hi;
  return omega_sphere(d - 1) *
         integrate(fa, 0.0, std::numeric_limits<double>::infinity(), o).value;
}

CapacityChain capacity_chain_bound(const RecurrenceInput& in, const SlowlyVaryingL& L,
                                   double r, double R, double c0, double tol) {
  if (!(c0 > 2.0)) throw std::invalid_argument("capacity_chain: c0 > 2 required");
  if (!(in.r0 <= r)) throw std::invalid_argument("capacity_chain: r below r0");
  if (!(2.0 * c0 * r <= R))
    throw std::invalid_argument("capacity_chain: chain of length zero (R < 2 c0 r)");
  // (2 c0)^N <= R/r < (2 c0)^{N+1}; c = (R/r)^{1/N} in [2 c0, (2 c0)^2)
  const int N = static_cast<int>(std::floor(std::log(R / r) / std::log(2.0 * c0)));
  const double c = std::pow(R / r, 1.0 / N);

  std::vector<double> s(N + 1);
  for (int n = 0; n <= N; ++n) s[n] = std::pow(c, n) * r;
  s[N] = R;
  std::vector<double> p(N + 1, 0.0);
  double csum = 0.0;
  for (int n = 1; n <= N; ++n) csum += 1.0 / L(s[n - 1]);
  for (int n = 1; n <= N; ++n) p[n] = (1.0 / L(s[n - 1])) / csum;

  auto profile = [&](double rho) {
    double u = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double phi = std::clamp((s[n] - rho) / (s[n] - s[n - 1]), 0.0, 1.0);
      u += p[n] * phi;
    }
    return u;
  };
  std::vector<double> breaks(s.begin(), s.end());

  CapacityChain out;
  out.n_layers = N;
  out.layer_radii = s;
  out.energy = radial_form_energy(in, profile, s[N], breaks, tol);
  if (in.has_diffusion) {
    auto fg = [&](double t) {
      double grad = 0.0;
      for (int n = 1; n <= N; ++n)
        if (t > s[n - 1] && t < s[n]) grad += p[n] / (s[n] - s[n - 1]);
      return grad * grad * in.diffusion_bound(t) * std::pow(t, in.model.d - 1.0);
    };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = tol;
    o.breakpoints = breaks;
    out.energy += omega_sphere(in.model.d - 1) * integrate(fg, r, s[N], o).value;
  }
  {
    auto f = [&](double t) { return 1.0 / (t * L(t)); };
    QuadOptions o;
    o.abs_tol = 1e-300;
    o.rel_tol = 1e-10;
    const double denom = integrate(f, r, R, o).value;
    out.bound_rhs = kCapacityChainK / denom;
  }
  out.bound_holds = out.energy <= out.bound_rhs;
  return out;
}

std::string CapacityChain::to_json() const {
  nlohmann::json j;
  j["n_layers"] = n_layers;
  j["layer_radii"] = layer_radii;
  j["energy"] = energy;
  j["bound_rhs"] = bound_rhs;
  j["bound_holds"] = bound_holds;
  return j.dump(2);
}

}  // namespace jumpform
