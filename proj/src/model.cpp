// SPDX-License-Identifier: Apache-2.0
#include "jumpform/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "jumpform/specfun.hpp"

namespace jumpform {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> x) { return dot(x, x); }

double norm(std::span<const double> x) { return std::sqrt(norm2(x)); }

double omega_sphere(int k) {
  if (k < 0) throw std::invalid_argument("omega_sphere: negative dimension");
  return 2.0 * std::pow(M_PI, (k + 1) / 2.0) / gamma((k + 1) / 2.0);
}

double angular_prefactor(int d) {
  if (d < 1) throw std::invalid_argument("angular_prefactor: d < 1");
  return d >= 2 ? omega_sphere(d - 2) : 1.0;
}

ModelParams make_model(int d, double alpha, double beta, double p, double q,
                       KernelVariant kv) {
  if (d < 1) throw std::invalid_argument("make_model: dimension must satisfy d >= 1");
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("make_model: alpha out of range (0,2)");
  if (!(beta > 0.0)) throw std::invalid_argument("make_model: beta must be positive");
  if (!std::isfinite(p) || !std::isfinite(q))
    throw std::invalid_argument("make_model: p,q must be finite");
  return ModelParams{d, alpha, beta, p, q, kv};
}

void require_big_jump_ok(const ModelParams& m) {
  if (!(m.q < m.alpha / 2.0))
    throw std::invalid_argument("model: q >= alpha/2, big-jump generator/simulation undefined");
}

double Coefficients::a1_t(double t) const { return std::pow(1.0 + t, m.p); }
double Coefficients::a2_t(double t) const { return std::pow(1.0 + t, m.q); }
double Coefficients::a1(std::span<const double> x) const { return a1_t(norm2(x)); }
double Coefficients::a2(std::span<const double> x) const { return a2_t(norm2(x)); }

namespace {
double dist(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}
}  // namespace

double Coefficients::c1(std::span<const double> x, std::span<const double> y) const {
  return dist(x, y) < 1.0 ? a1(x) + a1(y) : 0.0;
}

double Coefficients::c2(std::span<const double> x, std::span<const double> y) const {
  return dist(x, y) >= 1.0 ? a2(x) + a2(y) : 0.0;
}

double Coefficients::c(std::span<const double> x, std::span<const double> y) const {
  return dist(x, y) < 1.0 ? a1(x) + a1(y) : a2(x) + a2(y);
}

double LevyKernel::small_density(double rho) const {
  if (!(rho > 0.0 && rho < 1.0)) return 0.0;
  if (m.kernel_variant == KernelVariant::stable_pair)
    return std::pow(rho, -(m.d + m.alpha));
  return std::pow(rho, -(m.d + 2.0)) * std::pow(std::log(2.0 + rho), -m.alpha);
}

double LevyKernel::big_density(double rho) const {
  if (rho < 1.0) return 0.0;
  if (m.kernel_variant == KernelVariant::stable_pair)
    return std::pow(rho, -(m.d + m.beta));
  return std::pow(rho, -static_cast<double>(m.d)) *
         std::pow(std::log(2.0 + rho), -(m.beta + 2.0));
}

double LevyKernel::c_star() const {
  if (m.kernel_variant != KernelVariant::stable_pair)
    throw std::domain_error(
        "c_star: the log-perturbed small part has no finite |z|^2 moment; "
        "that kernel only enters through its big-jump part");
  return omega_sphere(m.d - 1) / (2.0 - m.alpha);
}

double LevyKernel::c_starstar() const {
  if (m.kernel_variant != KernelVariant::stable_pair)
    throw std::domain_error("c_starstar: no finite moment for the log-perturbed small part");
  return omega_sphere(m.d - 1) / (4.0 - m.alpha);
}

Coefficients coefficients(const ModelParams& m) { return Coefficients{m}; }
LevyKernel levy_kernel(const ModelParams& m) { return LevyKernel{m}; }

SmallJumpMoments small_jump_moments(const ModelParams& m) {
  LevyKernel k = levy_kernel(m);
  return SmallJumpMoments{k.c_star(), k.c_starstar()};
}

CoeffEval coeff_eval(const ModelParams& m, std::span<const double> x,
                     std::span<const double> y) {
  Coefficients co = coefficients(m);
  return CoeffEval{co.a1(x), co.a2(x), co.c(x, y)};
}

std::string kernel_variant_name(KernelVariant kv) {
  return kv == KernelVariant::stable_pair ? "stable_pair" : "log_perturbed";
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueConfig parse_config_text(const std::string& text) {
  KeyValueConfig cfg;
  std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j = nlohmann::json::parse(body);
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_string())
        cfg[it.key()] = it->get<std::string>();
      else
        cfg[it.key()] = it->dump();
    }
    return cfg;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string l = trim(line);
    if (l.empty() || l[0] == '#' || l[0] == ';') continue;
    size_t eq = l.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: malformed line '" + l + "'");
    cfg[trim(l.substr(0, eq))] = trim(l.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

ModelParams model_from_config(const KeyValueConfig& cfg) {
  auto need = [&cfg](const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end()) throw std::invalid_argument("config: missing key '" + key + "'");
    return it->second;
  };
  KernelVariant kv = KernelVariant::stable_pair;
  if (auto it = cfg.find("kernel_variant"); it != cfg.end()) {
    if (it->second == "stable_pair")
      kv = KernelVariant::stable_pair;
    else if (it->second == "log_perturbed")
      kv = KernelVariant::log_perturbed;
    else
      throw std::invalid_argument("config: unknown kernel_variant '" + it->second + "'");
  }
  return make_model(std::stoi(need("d")), std::stod(need("alpha")), std::stod(need("beta")),
                    std::stod(need("p")), std::stod(need("q")), kv);
}

std::string model_to_config_text(const ModelParams& m) {
  std::ostringstream ss;
  ss.precision(17);
  ss << "d = " << m.d << "\n"
     << "alpha = " << m.alpha << "\n"
     << "beta = " << m.beta << "\n"
     << "p = " << m.p << "\n"
     << "q = " << m.q << "\n"
     << "kernel_variant = " << kernel_variant_name(m.kernel_variant) << "\n";
  return ss.str();
}

std::string model_to_json(const ModelParams& m) {
  nlohmann::json j{{"d", m.d},
                   {"alpha", m.alpha},
                   {"beta", m.beta},
                   {"p", m.p},
                   {"q", m.q},
                   {"kernel_variant", kernel_variant_name(m.kernel_variant)}};
  return j.dump();
}

}  // namespace jumpform
