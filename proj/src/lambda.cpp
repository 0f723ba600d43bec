// SPDX-License-Identifier: Apache-2.0
#include "jumpform/lambda.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "jumpform/model.hpp"

namespace jumpform {

namespace {

// Shared stable pieces of the mirrored kernels. With w+- = 1 + r^2 +- 2 kappa r s,
//   Lp = log w+, Lm = log w-, a = (Lp+Lm)/2, h = (Lp-Lm)/2,
// computed so that every O(r^2) cancellation happens analytically. xi = r-1
// is taken as an exact input: near the (1,1) corner it carries far more
// precision than r itself.
struct LogPair {
  double Lp, Lm, a, h;
};

LogPair log_pair(double r, double xi, const AngularPoint& ap, double kappa,
                 double one_minus_kappa) {
  const double s = ap.s;
  if (r > 1e6) {
    // w+- = r^2 (1 +- 2 kappa s / r + 1/r^2); avoids forming r^4.
    const double lr2 = 2.0 * std::log(r);
    const double pa = (2.0 * kappa * s + 1.0 / r) / r;
    const double pb = (-2.0 * kappa * s + 1.0 / r) / r;
    const double la = std::log1p(pa), lb = std::log1p(pb);
    return LogPair{lr2 + la, lr2 + lb, lr2 + 0.5 * (la + lb), 0.5 * (la - lb)};
  }
  const double Lp = std::log1p(r * (r + 2.0 * kappa * s));
  // w- = (r-1)^2 + 2 r (1 - kappa s); 1 - kappa s = (1-s) + s (1-kappa)
  const double wm = xi * xi + 2.0 * r * (ap.one_minus_s + s * one_minus_kappa);
  double Lm, sum;
  if (wm > 0.25) {
    Lm = std::log1p(r * (r - 2.0 * kappa * s));
    const double ks = kappa * s;
    sum = std::log1p(r * r * (2.0 + r * r - 4.0 * ks * ks));
  } else {
    Lm = std::max(std::log(wm), -744.0);  // clamp at the denormal floor
    sum = Lp + Lm;
  }
  return LogPair{Lp, Lm, 0.5 * sum, 0.5 * (Lp - Lm)};
}

double jq_from_pair(double delta, double q, const LogPair& lp) {
  const double em = std::expm1(-delta * lp.a);
  const double sh = std::sinh(0.5 * delta * lp.h);
  const double group1 = em * std::cosh(delta * lp.h) + 2.0 * sh * sh;
  const double group2 = em * std::cosh((q - delta) * lp.h) +
                        2.0 * std::sinh(0.5 * (2.0 * q - delta) * lp.h) * (-sh);
  return 2.0 * group1 + 2.0 * std::exp(q * lp.a) * group2;
}

double finite_x_kappa(double x_norm, double& one_minus_kappa) {
  const double hyp = std::hypot(1.0, x_norm);
  one_minus_kappa = 1.0 / (hyp * (hyp + x_norm));
  return x_norm / hyp;
}

}  // namespace

double jq_tilde_xi(double delta, double r, double xi, const AngularPoint& ap, double q) {
  return jq_from_pair(delta, q, log_pair(r, xi, ap, 1.0, 0.0));
}

double jq_tilde(double delta, double r, const AngularPoint& ap, double q) {
  if (delta < 0.0) throw std::invalid_argument("jq_tilde: delta < 0");
  const double wm = (r - 1.0) * (r - 1.0) + 2.0 * r * ap.one_minus_s;
  if (wm == 0.0 && delta > 0.0)
    throw std::domain_error("jq_tilde: singular point (r,s) = (1,1)");
  return jq_tilde_xi(delta, r, r - 1.0, ap, q);
}

double jq_xi(double delta, double x_norm, double r, double xi, const AngularPoint& ap,
             double q) {
  double omk;
  const double kappa = finite_x_kappa(x_norm, omk);
  return jq_from_pair(delta, q, log_pair(r, xi, ap, kappa, omk));
}

double jq(double delta, double x_norm, double r, const AngularPoint& ap, double q) {
  if (delta < 0.0) throw std::invalid_argument("jq: delta < 0");
  return jq_xi(delta, x_norm, r, r - 1.0, ap, q);
}

double kq_pair_xi(double delta, double r, double xi, const AngularPoint& ap, double q) {
  const LogPair lp = log_pair(r, xi, ap, 1.0, 0.0);
  const double bwp = std::exp(-delta * lp.Lp) * (1.0 + std::exp(q * lp.Lp));
  const double lhat = 2.0 * lp.a;
  const double dl = -2.0 * lp.h;  // log(w-/w+)
  const double tail = std::exp(-delta * lp.Lp) * std::expm1(-delta * dl) +
                      std::exp((q - delta) * lp.Lp) * std::expm1((q - delta) * dl);
  return lhat * bwp + lp.Lm * tail;
}

double kq_pair(double delta, double r, const AngularPoint& ap, double q) {
  return kq_pair_xi(delta, r, r - 1.0, ap, q);
}

double critical_q(int d, double alpha) { return 0.5 * (alpha - d); }

double delta_max(double q, int d) {
  if (!(q > -0.5 * d))
    throw std::invalid_argument("delta_max: q <= -d/2, the limiting functional diverges");
  return 0.25 * (2.0 * q + d);
}

bool in_validated_regime(const LambdaParams& lp) {
  return lp.d >= 2 && lp.q >= critical_q(lp.d, lp.alpha) - 1e-12 && lp.q < 0.0;
}

namespace {

void check_lambda_params(const LambdaParams& lp, double delta) {
  if (lp.d < 1) throw std::invalid_argument("lambda: d < 1");
  if (!(lp.alpha > 0.0 && lp.alpha < 2.0))
    throw std::invalid_argument("lambda: alpha outside (0,2)");
  if (delta < 0.0) throw std::invalid_argument("lambda: delta < 0");
  const double d0 = delta_max(lp.q, lp.d);  // also enforces q > -d/2
  if (delta >= d0)
    throw std::invalid_argument("lambda: delta >= delta_0 = (2q+d)/4, kernel not integrable");
}

}  // namespace

QuadResult lambda_functional(double delta, const LambdaParams& lp, double tol) {
  check_lambda_params(lp, delta);
  if (delta == 0.0) return QuadResult{0.0, 0.0, 0, true};  // J~_q(0,.,.) == 0
  RsOptions o;
  o.abs_tol = tol;
  o.corner_strength = 2.0 * (lp.q - delta);
  const double q = lp.q;
  auto g = [q, delta](double r, double xi, const AngularPoint& ap) {
    return jq_tilde_xi(delta, r, xi, ap, q);
  };
  return integrate_rs(g, lp.d, lp.alpha, 0.0, o);
}

QuadResult lambda_derivative(double delta, const LambdaParams& lp, double tol) {
  check_lambda_params(lp, delta);
  RsOptions o;
  o.abs_tol = tol;
  o.corner_strength = 2.0 * (lp.q - delta) - 0.05;  // log factor slack
  const double q = lp.q;
  auto g = [q, delta](double r, double xi, const AngularPoint& ap) {
    return kq_pair_xi(delta, r, xi, ap, q);
  };
  QuadResult res = integrate_rs(g, lp.d, lp.alpha, 0.0, o);
  res.value = -res.value;
  return res;
}

QuadResult fq_profile(double delta, double x_norm, const LambdaParams& lp, double tol) {
  check_lambda_params(lp, delta);
  if (!(x_norm >= 0.0)) throw std::invalid_argument("fq_profile: x_norm < 0");
  RsOptions o;
  o.abs_tol = tol;
  o.corner_strength = 2.0 * (lp.q - delta);
  const double q = lp.q;
  const double r_lo = 1.0 / std::hypot(1.0, x_norm);
  auto g = [q, delta, x_norm](double r, double xi, const AngularPoint& ap) {
    return jq_xi(delta, x_norm, r, xi, ap, q);
  };
  return integrate_rs(g, lp.d, lp.alpha, r_lo, o);
}

namespace {

double angular_moment_a0(int d) { return d >= 2 ? beta(0.5, 0.5 * (d - 1)) : 2.0; }

// Stable log-sum kernel log(w+) + log(w-) for the I1/I2 quadratures.
double lhat_kernel(double r, double xi, const AngularPoint& ap) {
  const LogPair lp = log_pair(r, xi, ap, 1.0, 0.0);
  return 2.0 * lp.a;
}

}  // namespace

double i1_closed(int d, double alpha) {
  return (1.0 / alpha) * angular_moment_a0(d) * beta(0.5 * alpha, 1.0 - 0.5 * alpha) *
         gauss_sum_closed(d, alpha);
}

SeriesValue i1_series(int d, double alpha) {
  const double first =
      (1.0 / alpha) * angular_moment_a0(d) * beta(0.5 * alpha, 1.0 - 0.5 * alpha);
  // term_n = (4^n/(4n)) A_n B(n+a/2, n-a/2); the term ratio collapses to the
  // Gauss-series ratio (n+a/2)(n-a/2)/((n+1)(n+d/2)).
  const int n_terms = 24000;
  const double a = 0.5 * alpha;
  std::vector<double> terms;
  terms.reserve(n_terms);
  double t = (d >= 2 ? beta(1.5, 0.5 * (d - 1)) : 2.0) * beta(1.0 + a, 1.0 - a);
  for (int n = 1; n <= n_terms; ++n) {
    terms.push_back(t);
    t *= (n + a) * (n - a) / ((n + 1.0) * (n + 0.5 * d));
  }
  SeriesValue tail = tail_fit_sum(terms, 1.0 + 0.5 * d, false);
  SeriesValue out;
  out.value = first - tail.value;
  out.terms_used = tail.terms_used;
  out.tail_bound = tail.tail_bound;
  out.converged = tail.converged;
  return out;
}

QuadResult i1_quad(int d, double alpha, double tol) {
  RsOptions o;
  o.abs_tol = tol;
  o.corner_strength = -0.1;  // logarithmic corner
  return integrate_rs(
      [](double r, double xi, const AngularPoint& ap) { return lhat_kernel(r, xi, ap); }, d,
      alpha, 0.0, o);
}

QuadResult i2_quad(double q, int d, double alpha, double tol) {
  if (!(q > -0.5 * d)) throw std::invalid_argument("i2_quad: q <= -d/2 diverges");
  RsOptions o;
  o.abs_tol = tol;
  o.corner_strength = 2.0 * q - 0.05;
  auto g = [q](double r, double xi, const AngularPoint& ap) {
    // w+^q log w+ + w-^q log w- = lhat w+^q + Lm w+^q expm1(q (Lm - Lp))
    const LogPair lp = log_pair(r, xi, ap, 1.0, 0.0);
    return std::exp(q * lp.Lp) * (2.0 * lp.a + lp.Lm * std::expm1(-2.0 * q * lp.h));
  };
  return integrate_rs(g, d, alpha, 0.0, o);
}

double i2_series_critical(int d, double alpha) {
  if (d < 2)
    throw std::invalid_argument("i2_series_critical: the Beta-identity route needs d >= 2");
  DigammaWeightedSums s = digamma_weighted_sum(d, alpha);
  return -gamma(0.5) * gamma(0.5 * (d - 1)) / (2.0 * gamma(0.5 * (d - alpha))) *
         s.weighted.value;
}

LambdaResult evaluate_lambda_suite(const LambdaParams& lp, double delta, double tol) {
  LambdaResult r{};
  r.q = lp.q;
  r.delta = delta;
  r.d = lp.d;
  r.alpha = lp.alpha;
  r.outside_validated_regime = !in_validated_regime(lp);
  QuadResult lam = lambda_functional(delta, lp, tol);
  QuadResult lamp = lambda_derivative(delta, lp, tol);
  QuadResult lam0 = lambda_derivative(0.0, lp, tol);
  QuadResult i1q = i1_quad(lp.d, lp.alpha, tol);
  QuadResult i2q = i2_quad(lp.q, lp.d, lp.alpha, tol);
  SeriesValue i1s = i1_series(lp.d, lp.alpha);
  r.lambda_quad = lam.value;
  r.err_lambda = lam.abs_error_estimate;
  r.lambda_prime_quad = lamp.value;
  r.err_lambda_prime = lamp.abs_error_estimate;
  r.lambda_prime_at_zero = lam0.value;
  r.I1_quad = i1q.value;
  r.err_I1_quad = i1q.abs_error_estimate;
  r.I2_quad = i2q.value;
  r.err_I2_quad = i2q.abs_error_estimate;
  r.I1_closed = i1_closed(lp.d, lp.alpha);
  r.I1_series = i1s.value;
  r.err_I1_series = i1s.tail_bound;
  return r;
}

std::string LambdaResult::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["alpha"] = alpha;
  j["q"] = q;
  j["delta"] = delta;
  j["lambda_quad"] = lambda_quad;
  j["lambda_prime_quad"] = lambda_prime_quad;
  j["lambda_prime_at_zero"] = lambda_prime_at_zero;
  j["I1_quad"] = I1_quad;
  j["I1_closed"] = I1_closed;
  j["I1_series"] = I1_series;
  j["I2_quad"] = I2_quad;
  j["method_errors"] = {{"lambda", err_lambda},
                        {"lambda_prime", err_lambda_prime},
                        {"I1_quad", err_I1_quad},
                        {"I2_quad", err_I2_quad},
                        {"I1_series", err_I1_series}};
  j["outside_validated_regime"] = outside_validated_regime;
  return j.dump(2);
}

std::string LambdaResult::csv_header() {
  return "d,alpha,q,delta,lambda,lambda_prime,lambda_prime_at_zero,I1_quad,I1_closed,"
         "I1_series,I2_quad\r\n";
}

std::string LambdaResult::to_csv_row() const {
  std::ostringstream ss;
  ss.precision(17);
  ss << d << "," << alpha << "," << q << "," << delta << "," << lambda_quad << ","
     << lambda_prime_quad << "," << lambda_prime_at_zero << "," << I1_quad << "," << I1_closed
     << "," << I1_series << "," << I2_quad << "\r\n";
  return ss.str();
}

}  // namespace jumpform
