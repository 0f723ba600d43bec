// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace jumpform {

enum class KernelVariant { stable_pair, log_perturbed };

// The coefficient/kernel tuple (d, alpha, beta, p, q):
//   a1(x) = (1+|x|^2)^p drives the small-jump part (|x-y| < 1, tail index
//   alpha), a2(x) = (1+|x|^2)^q the big-jump part (|x-y| >= 1; tail index
//   alpha for the generator/simulation surface, beta for the two-index
//   recurrence kernels).
struct ModelParams {
  int d = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double p = 0.0;
  double q = 0.0;
  KernelVariant kernel_variant = KernelVariant::stable_pair;
};

ModelParams make_model(int d, double alpha, double beta, double p, double q,
                       KernelVariant kv = KernelVariant::stable_pair);

// Throws std::invalid_argument unless q < alpha/2 (integrability of a2
// against the stable tail; required by every big-jump generator and
// simulation entry point).
void require_big_jump_ok(const ModelParams& m);

// Surface area of the unit sphere S^k in R^{k+1}.
double omega_sphere(int k);
// omega_{d-2} of the polar reduction: omega_sphere(d-2) for d >= 2 and the
// two-point-rule convention 1 for d = 1.
double angular_prefactor(int d);

struct Coefficients {
  ModelParams m;
  double a1_t(double t) const;  // t = |x|^2
  double a2_t(double t) const;
  double a1(std::span<const double> x) const;
  double a2(std::span<const double> x) const;
  double c1(std::span<const double> x, std::span<const double> y) const;
  double c2(std::span<const double> x, std::span<const double> y) const;
  double c(std::span<const double> x, std::span<const double> y) const;
};

// Radial structure of the rotationally invariant Levy measure nu:
// nu(dz) = small_density(|z|) dz on 0<|z|<1 plus big_density(|z|) dz on
// |z|>=1.
struct LevyKernel {
  ModelParams m;
  double small_density(double rho) const;
  double big_density(double rho) const;
  // closed-form small-jump moments c_* and c_** for the stable pair kernel;
  // the log-perturbed small part has no finite |z|^2 moment and is rejected.
  double c_star() const;
  double c_starstar() const;
};

Coefficients coefficients(const ModelParams& m);
LevyKernel levy_kernel(const ModelParams& m);

struct SmallJumpMoments {
  double c_star;
  double c_starstar;
};
SmallJumpMoments small_jump_moments(const ModelParams& m);

struct CoeffEval {
  double a1_x;
  double a2_x;
  double c_xy;
};
CoeffEval coeff_eval(const ModelParams& m, std::span<const double> x,
                     std::span<const double> y);

// Flat key=value config (``#`` comments) or a JSON object; both map string
// keys to string values.
using KeyValueConfig = std::map<std::string, std::string>;
KeyValueConfig parse_config_text(const std::string& text);
KeyValueConfig load_config_file(const std::string& path);
ModelParams model_from_config(const KeyValueConfig& cfg);
std::string model_to_config_text(const ModelParams& m);
std::string model_to_json(const ModelParams& m);
std::string kernel_variant_name(KernelVariant kv);

// Small vector helpers shared by the numerical modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);   // |x|^2
double norm(std::span<const double> x);

}  // namespace jumpform
