// SPDX-License-Identifier: Apache-2.0
//
// Brute-force oracles shared by the unit and acceptance suites. These stay
// independent of the quadrature paths they check: Monte Carlo integration
// with importance sampling for the small-jump generator, and empirical
// distribution statistics.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jumpform/model.hpp"
#include "jumpform/rng.hpp"
#include "jumpform/testfunction.hpp"

namespace jumpform_test {

using namespace jumpform;

struct McValue {
  double value;
  double se;
};

// Monte Carlo evaluation of the full small-jump generator (compensated
// integral plus coefficient-asymmetry drift) at x = x_norm e1. Importance
// density rho ~ (2-alpha) rho^{1-alpha} on (0,1), uniform direction.
inline McValue mc_small_jump_generator(const RadialC2& u, double x_norm,
                                       const ModelParams& m, long n_samples,
                                       uint64_t seed) {
  Philox4x32 rng(seed, 0);
  const int d = m.d;
  const double alpha = m.alpha, p = m.p;
  const double X = x_norm, t0 = X * X;
  const double du = u.d1_t(t0);
  const double a1x = std::pow(1.0 + t0, p);
  const double norm_const = omega_sphere(d - 1) / (2.0 - alpha);
  std::vector<double> z(d), dir(d);
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    const double rho = std::pow(rng.uniform(), 1.0 / (2.0 - alpha));
    double nz = 0.0;
    for (int k = 0; k < d; ++k) {
      dir[k] = rng.normal();
      nz += dir[k] * dir[k];
    }
    nz = std::sqrt(nz);
    for (int k = 0; k < d; ++k) z[k] = dir[k] * rho / nz;
    const double xz = X * z[0];
    double tp = t0 + 2.0 * xz + rho * rho;
    double tm = t0 - 2.0 * xz + rho * rho;
    const double rem = u.value_t(tp) - u.value_t(t0) - 2.0 * du * xz;
    const double a1p = std::pow(1.0 + tp, p), a1m = std::pow(1.0 + tm, p);
    const double integrand =
        rem * (a1x + a1p) + 0.5 * (2.0 * du * xz) * (a1p - a1m);
    const double y = integrand * norm_const / (rho * rho);
    const double dm = y - mean;
    mean += dm / (i + 1);
    m2 += dm * (y - mean);
  }
  const double var = m2 / (n_samples - 1);
  return McValue{mean, std::sqrt(var / n_samples)};
}

// Kolmogorov-Smirnov statistic of samples against a cdf given as a callable.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, const Cdf& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d_stat = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d_stat = std::max(d_stat, std::abs((i + 1) / n - f));
    d_stat = std::max(d_stat, std::abs(f - i / n));
  }
  return d_stat;
}

}  // namespace jumpform_test
