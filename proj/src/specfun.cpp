// SPDX-License-Identifier: Apache-2.0
#include "jumpform/specfun.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace jumpform {

namespace {

bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

// Asymptotic expansion coefficients: psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n}).
constexpr double kPsiAsym[] = {
    1.0 / 12.0,   -1.0 / 120.0,     1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0,  -691.0 / 32760.0, 1.0 / 12.0,
};

}  // namespace

double gamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at nonpositive integer x=" + std::to_string(x));
  return std::tgamma(x);
}

LogGamma log_gamma_signed(double x) {
  if (is_nonpositive_integer(x))
    return LogGamma{std::numeric_limits<double>::infinity(), 0};
  int sign = 0;
  double la = lgamma_r(x, &sign);
  return LogGamma{la, sign};
}

double digamma(double x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("digamma: pole at nonpositive integer x=" + std::to_string(x));
  double result = 0.0;
  if (x < 0.5) {
    // psi(x) = psi(1-x) - pi cot(pi x); the cotangent is periodic, so reduce
    // the argument to avoid precision loss for very negative x.
    double frac = x - std::floor(x);
    result -= M_PI / std::tan(M_PI * frac);
    x = 1.0 - x;
  }
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0, p = inv2;
  for (double c : kPsiAsym) {
    series += c * p;
    p *= inv2;
  }
  return result + std::log(x) - 0.5 / x - series;
}

double beta(double x, double y) {
  LogGamma gx = log_gamma_signed(x), gy = log_gamma_signed(y), gxy = log_gamma_signed(x + y);
  if (gx.sign == 0 || gy.sign == 0)
    throw std::domain_error("beta: pole in numerator gamma");
  if (gxy.sign == 0) return 0.0;  // 1/Gamma at a pole
  double lg = gx.log_abs + gy.log_abs - gxy.log_abs;
  return gx.sign * gy.sign * gxy.sign * std::exp(lg);
}

double pochhammer(double lambda, int n) {
  if (n < 0) throw std::invalid_argument("pochhammer: n must be >= 0");
  if (n <= 64) {
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= lambda + k;
    return p;
  }
  LogGamma num = log_gamma_signed(lambda + n), den = log_gamma_signed(lambda);
  if (den.sign == 0) {
    // Gamma(lambda) pole: (lambda)_n is zero unless the pole cancels, which
    // for integer lambda <= 0 happens only when lambda + n <= 0 as well.
    if (num.sign == 0) {
      double p = 1.0;
      for (int k = 0; k < n; ++k) p *= lambda + k;
      return p;
    }
    return 0.0;
  }
  if (num.sign == 0) return std::numeric_limits<double>::infinity();
  return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

double binomial_coefficient(double a, int k) {
  if (k < 0) return 0.0;
  double p = 1.0;
  for (int j = 0; j < k; ++j) p *= (a - j) / (k - j);
  return p;
}

namespace {

// Levin u-transform estimates L_k of the series limit, together with the
// cancellation magnitude of each numerator (the transform loses precision
// as the order grows, so the caller picks the most stable order rather than
// the largest).
struct LevinEstimate {
  double value;
  double cancellation;  // max |summand| / |numerator|
};

std::vector<LevinEstimate> levin_u_estimates(const std::vector<double>& terms, int kmax) {
  const int m = static_cast<int>(terms.size());
  std::vector<long double> s(m);
  long double acc = 0.0L;
  for (int j = 0; j < m; ++j) {
    acc += terms[j];
    s[j] = acc;
  }
  std::vector<LevinEstimate> out;
  const long double beta0 = 1.0L;
  for (int k = 1; k < std::min(m, kmax + 1); ++k) {
    long double num = 0.0L, den = 0.0L, binom = 1.0L, num_abs = 0.0L;
    bool ok = true;
    for (int j = 0; j <= k; ++j) {
      if (terms[j] == 0.0) {
        ok = false;
        break;
      }
      long double c = binom * powl((beta0 + j) / (beta0 + k), k - 1);
      long double w = 1.0L / ((beta0 + j) * static_cast<long double>(terms[j]));
      long double sgn = (j % 2 == 0) ? 1.0L : -1.0L;
      num += sgn * c * s[j] * w;
      num_abs += fabsl(c * s[j] * w);
      den += sgn * c * w;
      binom = binom * (k - j) / (j + 1.0L);
    }
    if (ok && den != 0.0L && num != 0.0L)
      out.push_back({static_cast<double>(num / den), static_cast<double>(num_abs / fabsl(num))});
  }
  return out;
}

}  // namespace

SeriesValue accelerated_sum(const std::vector<double>& terms) {
  SeriesValue sv;
  double s = 0.0;
  int small_run = 0;
  for (size_t n = 0; n < terms.size(); ++n) {
    s += terms[n];
    sv.terms_used = static_cast<int>(n) + 1;
    if (std::abs(terms[n]) < 1e-14 * std::max(1e-300, std::abs(s)))
      ++small_run;
    else
      small_run = 0;
    if (small_run >= 3) {
      sv.value = s;
      sv.tail_bound = 3.0 * std::abs(terms[n]) + 1e-15 * std::abs(s);
      sv.converged = true;
      return sv;
    }
  }
  // Slowly decaying tail: resum with the Levin u-transform and pick the
  // order where successive estimates stabilize before cancellation noise
  // takes over.
  std::vector<LevinEstimate> est = levin_u_estimates(terms, 44);
  if (est.size() >= 6) {
    double scale = 0.0;
    for (const auto& e : est) scale = std::max(scale, std::abs(e.value));
    int best = -1;
    double best_score = std::numeric_limits<double>::infinity();
    for (size_t k = 2; k < est.size(); ++k) {
      double diff = std::abs(est[k].value - est[k - 1].value) +
                    std::abs(est[k - 1].value - est[k - 2].value);
      double noise = 2e-19 * est[k].cancellation * std::max(scale, 1e-300);
      double score = diff + noise;
      if (score < best_score) {
        best_score = score;
        best = static_cast<int>(k);
      }
    }
    sv.value = est[best].value;
    sv.terms_used = static_cast<int>(terms.size());
    sv.tail_bound = best_score + 1e-15 * std::abs(sv.value);
    sv.converged = sv.tail_bound < 1e-7 * std::max(1.0, std::abs(sv.value));
    return sv;
  }
  sv.value = s;
  sv.tail_bound = std::abs(terms.empty() ? 0.0 : terms.back()) * terms.size();
  sv.converged = false;
  return sv;
}

namespace {

// Least-squares solve of the overdetermined remainder model by modified
// Gram-Schmidt QR in long double; returns the coefficient vector.
std::vector<long double> lsq_solve(std::vector<std::vector<long double>> cols,
                                   std::vector<long double> rhs) {
  const size_t ncol = cols.size(), nrow = rhs.size();
  std::vector<std::vector<long double>> q = cols;
  std::vector<std::vector<long double>> r(ncol, std::vector<long double>(ncol, 0.0L));
  for (size_t k = 0; k < ncol; ++k) {
    long double nk = 0.0L;
    for (size_t i = 0; i < nrow; ++i) nk += q[k][i] * q[k][i];
    nk = sqrtl(nk);
    r[k][k] = nk;
    for (size_t i = 0; i < nrow; ++i) q[k][i] /= nk;
    for (size_t j = k + 1; j < ncol; ++j) {
      long double dp = 0.0L;
      for (size_t i = 0; i < nrow; ++i) dp += q[k][i] * cols[j][i];
      r[k][j] = dp;
      for (size_t i = 0; i < nrow; ++i) cols[j][i] -= dp * q[k][i];
      q[j] = cols[j];
    }
  }
  std::vector<long double> qtb(ncol, 0.0L), x(ncol, 0.0L);
  for (size_t k = 0; k < ncol; ++k)
    for (size_t i = 0; i < nrow; ++i) qtb[k] += q[k][i] * rhs[i];
  for (size_t k = ncol; k-- > 0;) {
    long double s = qtb[k];
    for (size_t j = k + 1; j < ncol; ++j) s -= r[k][j] * x[j];
    x[k] = s / r[k][k];
  }
  return x;
}

SeriesValue tail_fit_impl(const std::vector<double>& terms, double gamma, bool with_log,
                          size_t n_max, bool* ok) {
  n_max = std::min(n_max, terms.size());
  std::vector<long double> prefix(n_max + 1, 0.0L);
  for (size_t n = 0; n < n_max; ++n) prefix[n + 1] = prefix[n] + terms[n];

  std::vector<size_t> ns;
  double nn = static_cast<double>(n_max);
  for (int j = 0; j < 13 && nn >= 64.0; ++j, nn /= 1.3) ns.push_back(static_cast<size_t>(nn));
  const int orders = 5;
  const size_t ncol = 1 + orders * (with_log ? 2 : 1);
  if (ns.size() < ncol + 2) {  // not enough ladder room; fall back
    SeriesValue sv;
    sv.value = static_cast<double>(prefix[n_max]);
    sv.terms_used = static_cast<int>(n_max);
    sv.tail_bound = std::abs(terms.empty() ? 0.0 : terms[n_max - 1]) * n_max;
    sv.converged = false;
    *ok = false;
    return sv;
  }
  *ok = true;

  // S_N = S_inf - R_N, R_N = N^{1-gamma} sum_k (a_k + b_k log N) N^{-k}
  std::vector<std::vector<long double>> cols(ncol, std::vector<long double>(ns.size()));
  std::vector<long double> rhs(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) {
    const long double N = static_cast<long double>(ns[i]);
    rhs[i] = prefix[ns[i]];
    cols[0][i] = 1.0L;
    long double base = powl(N, 1.0L - static_cast<long double>(gamma));
    for (int k = 0; k < orders; ++k) {
      cols[1 + (with_log ? 2 * k : k)][i] = -base;
      if (with_log) cols[2 + 2 * k][i] = -base * logl(N);
      base /= N;
    }
  }
  // scale columns for conditioning
  std::vector<long double> scale(ncol, 0.0L);
  for (size_t k = 0; k < ncol; ++k) {
    for (auto v : cols[k]) scale[k] = std::max(scale[k], fabsl(v));
    if (scale[k] == 0.0L) scale[k] = 1.0L;
    for (auto& v : cols[k]) v /= scale[k];
  }
  std::vector<long double> x = lsq_solve(cols, rhs);
  SeriesValue sv;
  sv.value = static_cast<double>(x[0] / scale[0]);
  sv.terms_used = static_cast<int>(n_max);
  return sv;
}

}  // namespace

SeriesValue tail_fit_sum(const std::vector<double>& terms, double gamma, bool with_log) {
  bool ok = false, ok2 = false;
  SeriesValue full = tail_fit_impl(terms, gamma, with_log, terms.size(), &ok);
  if (!ok) return full;
  SeriesValue half = tail_fit_impl(terms, gamma, with_log, (terms.size() * 2) / 3, &ok2);
  full.tail_bound = std::abs(full.value - half.value) + 1e-15 * std::abs(full.value);
  full.converged = full.tail_bound < 1e-7 * std::max(1.0, std::abs(full.value));
  return full;
}

double gauss_sum_closed(int d, double alpha) {
  LogGamma num = log_gamma_signed(d / 2.0);
  LogGamma ga = log_gamma_signed((d + alpha) / 2.0);
  LogGamma gb = log_gamma_signed((d - alpha) / 2.0);
  if (ga.sign == 0 || gb.sign == 0) return 0.0;  // reciprocal of a Gamma pole
  return num.sign * num.sign * ga.sign * gb.sign *
         std::exp(2.0 * num.log_abs - ga.log_abs - gb.log_abs);
}

SeriesValue gauss_sum(int d, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("gauss_sum: alpha outside (0,2)");
  if (d < 1) throw std::invalid_argument("gauss_sum: d < 1");
  const int n_terms = 24000;
  std::vector<double> terms;
  terms.reserve(n_terms);
  double t = 1.0;
  const double a = alpha / 2.0;
  for (int n = 0; n < n_terms; ++n) {
    terms.push_back(t);
    t *= (a + n) * (-a + n) / ((d / 2.0 + n) * (n + 1.0));
  }
  return tail_fit_sum(terms, 1.0 + 0.5 * d, false);
}

double digamma_weighted_closed(int d, double alpha) {
  double a = alpha / 2.0;
  return -2.0 * gamma(-a) * gamma(1.0 + a) * gamma(d / 2.0) / (alpha * gamma((d + alpha) / 2.0));
}

DigammaWeightedSums digamma_weighted_sum(int d, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("digamma_weighted_sum: alpha outside (0,2)");
  const int n_terms = 24000;
  std::vector<double> plain, weighted;
  plain.reserve(n_terms);
  weighted.reserve(n_terms);
  // g_n = Gamma(n - a/2)/n! via ratio recurrence. The psi-weighted series is
  // summed by parts: with G_n = sum_{k<=n} g_k -> 0 and
  // psi(x+1) - psi(x) = 1/x, sum g_n psi(n + d/2) = -sum G_n/(n + d/2).
  // Both resulting tails are pure powers n^{-1-a/2}, which the remainder
  // fit resolves to near machine precision.
  double g = gamma(-alpha / 2.0);
  double big_g = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    plain.push_back(g);
    big_g += g;
    weighted.push_back(-big_g / (n + 0.5 * d));
    g *= (n - alpha / 2.0) / (n + 1.0);
  }
  DigammaWeightedSums out;
  out.unweighted = tail_fit_sum(plain, 1.0 + 0.5 * alpha, false);
  out.weighted = tail_fit_sum(weighted, 1.0 + 0.5 * alpha, false);
  return out;
}

double partial_binomial_digamma_direct(double a, int n) {
  if (n < 1) throw std::invalid_argument("partial_binomial_digamma: n must be >= 1");
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s += binomial_coefficient(a, k) * sign / (n - k);
  }
  return s;
}

double partial_binomial_digamma(double a, int n) {
  if (a == std::floor(a))
    throw std::invalid_argument("partial_binomial_digamma: integer a hits a digamma pole");
  if (n < 1) throw std::invalid_argument("partial_binomial_digamma: n must be >= 1");
  double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * binomial_coefficient(a, n) * (digamma(n - a) - digamma(-a));
}

std::vector<IdentityRow> run_identity_suite(const std::vector<int>& ds,
                                            const std::vector<double>& alphas) {
  std::vector<IdentityRow> rows;
  char buf[96];
  for (int d : ds) {
    for (double alpha : alphas) {
      std::snprintf(buf, sizeof(buf), "d=%d alpha=%g", d, alpha);
      SeriesValue gs = gauss_sum(d, alpha);
      rows.push_back({"gauss_sum", buf, gs.value, gauss_sum_closed(d, alpha),
                      std::abs(gs.value - gauss_sum_closed(d, alpha))});
      DigammaWeightedSums dw = digamma_weighted_sum(d, alpha);
      rows.push_back({"digamma_weighted_sum", buf, dw.weighted.value,
                      digamma_weighted_closed(d, alpha),
                      std::abs(dw.weighted.value - digamma_weighted_closed(d, alpha))});
      rows.push_back({"gamma_zero_sum", buf, dw.unweighted.value, 0.0,
                      std::abs(dw.unweighted.value)});
    }
  }
  // Partial binomial-digamma identity on a fixed (a, n) grid; a is tied to
  // the alpha grid through a = -alpha/2 plus a few spot values.
  std::vector<double> as;
  for (double alpha : alphas) as.push_back(-alpha / 2.0);
  as.push_back(0.3);
  as.push_back(-0.75);
  for (double a : as) {
    for (int n : {1, 2, 5, 9}) {
      std::snprintf(buf, sizeof(buf), "a=%g n=%d", a, n);
      double lhs = partial_binomial_digamma_direct(a, n);
      double rhs = partial_binomial_digamma(a, n);
      rows.push_back({"partial_binomial_digamma", buf, lhs, rhs, std::abs(lhs - rhs)});
    }
  }
  return rows;
}

}  // namespace jumpform
