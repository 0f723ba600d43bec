// SPDX-License-Identifier: Apache-2.0
//
// jumpform: command-line front end over the analytic and Monte Carlo
// modules. Subcommands: classify, drift, lambda, simulate, recurrence,
// identities. Every artifact embeds a manifest; re-running with --config
// pointing at an emitted report reproduces the numeric body byte for byte.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "jumpform/generator.hpp"
#include "jumpform/lambda.hpp"
#include "jumpform/model.hpp"
#include "jumpform/recurrence.hpp"
#include "jumpform/report.hpp"
#include "jumpform/simulate.hpp"
#include "jumpform/specfun.hpp"

namespace jf = jumpform;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  double tol = 1e-8;
};

// Accepts either a flat key=value / JSON config or a previously emitted
// report (the manifest's config echo is reused).
jf::KeyValueConfig load_config(const std::string& path) {
  jf::KeyValueConfig cfg = jf::load_config_file(path);
  if (cfg.count("manifest") || cfg.count("results")) {
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    jf::KeyValueConfig out;
    for (auto it = j["manifest"]["config"].begin(); it != j["manifest"]["config"].end(); ++it)
      out[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
    return out;
  }
  return cfg;
}

double get_num(const jf::KeyValueConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : std::stod(it->second);
}

long get_long(const jf::KeyValueConfig& cfg, const std::string& key, long fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : std::stol(it->second);
}

std::string get_str(const jf::KeyValueConfig& cfg, const std::string& key,
                    const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

jf::RunManifest make_manifest(const std::string& sub, const jf::KeyValueConfig& cfg,
                              uint64_t seed) {
  jf::RunManifest m;
  m.subcommand = sub;
  m.config = cfg;
  m.seed = seed;
  m.generated_at = jf::iso_timestamp_now();
  return m;
}

void finish(jf::RunManifest& m, const std::string& results_json, const std::string& path,
            std::chrono::steady_clock::time_point t0) {
  m.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  m.outputs.push_back(path);
  jf::write_text_file(path, jf::wrap_report(m, results_json));
  std::cout << path << "\n";
}

int cmd_classify(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg = load_config(args.config_path);
  jf::ModelParams model = jf::model_from_config(cfg);
  // Classification thresholds live in the (1+|x|)-exponent convention;
  // the model's (1+|x|^2)^p coefficients convert by doubling.
  const double p_lin = 2.0 * model.p;
  const double q_lin = 2.0 * model.q;
  if (!(q_lin < model.beta))
    throw std::invalid_argument("classify: q exponent must lie below beta (kernel setting)");
  const bool small_rec = p_lin <= 2.0 - model.d;
  const bool big_rec = q_lin <= model.beta - model.d;
  bool diff_rec = true;
  const bool has_diff = cfg.count("r_diff") > 0;
  double r_diff = 0.0;
  if (has_diff) {
    r_diff = get_num(cfg, "r_diff", 0.0);
    diff_rec = r_diff <= 2.0 - model.d;
  }
  nlohmann::json res;
  res["convention"] = "(1+|x|) exponents; model (1+|x|^2)^p doubles to p'=2p";
  res["small_jump"] = {{"exponent", p_lin}, {"threshold", 2.0 - model.d}, {"recurrent", small_rec}};
  res["big_jump"] = {{"exponent", q_lin}, {"threshold", model.beta - model.d}, {"recurrent", big_rec}};
  if (has_diff)
    res["diffusion"] = {{"exponent", r_diff}, {"threshold", 2.0 - model.d}, {"recurrent", diff_rec}};
  const bool recurrent = small_rec && big_rec && diff_rec;
  res["verdict"] = recurrent ? "recurrent" : "transient";
  res["evidence"] = {"jumpform drift --config <same>", "jumpform lambda --config <same>",
                     "jumpform simulate --config <same>", "jumpform recurrence --config <same>"};
  jf::RunManifest m = make_manifest("classify", cfg, 0);
  finish(m, res.dump(), args.out_dir + "/classify.json", t0);
  return 0;
}

int cmd_identities(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  std::vector<int> ds{1, 2, 3, 4};
  std::vector<double> alphas{0.3, 0.9, 1.0, 1.5, 1.9};
  auto rows = jf::run_identity_suite(ds, alphas);
  nlohmann::json res = nlohmann::json::array();
  double worst = 0.0;
  for (const auto& r : rows) {
    res.push_back({{"identity", r.name},
                   {"params", r.params},
                   {"lhs", r.lhs},
                   {"rhs", r.rhs},
                   {"abs_err", r.abs_err}});
    worst = std::max(worst, r.abs_err);
  }
  nlohmann::json wrap;
  wrap["rows"] = res;
  wrap["worst_abs_err"] = worst;
  wrap["pass"] = worst <= 1e-8;
  jf::RunManifest m = make_manifest("identities", cfg, 0);
  finish(m, wrap.dump(), args.out_dir + "/identities.json", t0);
  return worst <= 1e-8 ? 0 : 1;
}

int cmd_drift(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg = load_config(args.config_path);
  jf::ModelParams model = jf::model_from_config(cfg);
  const double delta = get_num(cfg, "delta", 0.5 * (model.p - (2.0 - model.d) / 2.0));
  std::vector<double> radii = jf::default_radii();
  jf::DriftReport rep = jf::drift_profile_L1(model, delta, radii, args.tol);
  jf::RunManifest m = make_manifest("drift", cfg, 0);
  jf::write_text_file(args.out_dir + "/drift.csv", rep.to_csv());
  m.outputs.push_back(args.out_dir + "/drift.csv");
  finish(m, rep.to_json(), args.out_dir + "/drift.json", t0);
  return rep.all_negative_beyond_M ? 0 : 1;
}

int cmd_lambda(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg = load_config(args.config_path);
  jf::ModelParams model = jf::model_from_config(cfg);
  const double qc = jf::critical_q(model.d, model.alpha);
  const double q = get_num(cfg, "q", qc);
  jf::LambdaParams lp{q, model.d, model.alpha};
  const double dmax = jf::delta_max(q, model.d);
  const double delta = get_num(cfg, "delta", 0.4 * dmax);
  jf::LambdaResult r = jf::evaluate_lambda_suite(lp, delta, args.tol);
  jf::write_text_file(args.out_dir + "/lambda.csv",
                      jf::LambdaResult::csv_header() + r.to_csv_row());
  // invariant: -Lambda'(0) = I1 + I2(q); at the critical q it vanishes
  const double scale = std::max(1.0, std::abs(r.I1_quad));
  bool ok = std::abs(r.lambda_prime_at_zero + r.I1_quad + r.I2_quad) <= 1e-6 * scale;
  if (std::abs(q - qc) < 1e-12) ok = ok && std::abs(r.lambda_prime_at_zero) <= 1e-6;
  jf::RunManifest m = make_manifest("lambda", cfg, 0);
  m.outputs.push_back(args.out_dir + "/lambda.csv");
  finish(m, r.to_json(), args.out_dir + "/lambda.json", t0);
  return ok ? 0 : 1;
}

jf::SimConfig sim_config_from(const jf::KeyValueConfig& cfg, const CommonArgs& args) {
  jf::SimConfig sc;
  sc.model = jf::model_from_config(cfg);
  sc.x0_norm = get_num(cfg, "x0_norm", 100.0);
  sc.r_hit = get_num(cfg, "r_hit", 1.0);
  sc.max_jumps = get_long(cfg, "max_jumps", 1000000);
  sc.t_max = get_num(cfg, "t_max", std::numeric_limits<double>::infinity());
  sc.n_paths = get_long(cfg, "n_paths", 10000);
  sc.seed = args.seed_set ? args.seed : static_cast<uint64_t>(get_long(cfg, "seed", 1));
  sc.epsilon_cutoff = get_num(cfg, "epsilon_cutoff", 0.0);
  sc.threads = args.threads;
  return sc;
}

int cmd_simulate(const CommonArgs& args, const std::string& mode, bool log_events) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg = load_config(args.config_path);
  jf::SimConfig sc = sim_config_from(cfg, args);
  cfg["seed"] = std::to_string(sc.seed);  // echo the effective seed
  cfg["mode"] = mode;
  jf::RunManifest m = make_manifest("simulate", cfg, sc.seed);
  const double delta_ref = get_num(cfg, "delta_ref", 0.05);
  int rc = 0;
  std::string results;
  if (mode == "big") {
    std::string events_path = args.out_dir + "/simulate_events.csv";
    jf::HittingEstimate est =
        jf::run_big_jump_paths(sc, delta_ref, log_events ? &events_path : nullptr);
    if (log_events) m.outputs.push_back(events_path);
    results = est.to_json();
    const std::string expect = get_str(cfg, "expect", "");
    if (expect == "transient")
      rc = (est.ci_high <= est.theory_bound) ? 0 : 1;
    else if (expect == "recurrent")
      rc = (est.freq >= 0.9) ? 0 : 1;
  } else if (mode == "dynkin") {
    const double delta = get_num(cfg, "delta", 0.3);
    const double t_star = get_num(cfg, "t_star", 2.0);
    jf::DynkinResidual res = jf::dynkin_check(sc, delta, t_star);
    results = res.to_json();
    rc = (std::abs(res.residual) <= 3.0 * res.se && res.budget_overruns == 0) ? 0 : 1;
  } else if (mode == "small-eps") {
    jf::SmallJumpEpsReport rep = jf::run_small_jump_paths_eps(sc, delta_ref);
    results = rep.to_json();
    const double widen = rep.bias_indicator + (rep.at_eps.ci_high - rep.at_eps.ci_low);
    rc = (std::abs(rep.at_eps.freq - rep.at_half_eps.freq) <= widen +
              (rep.at_half_eps.ci_high - rep.at_half_eps.ci_low))
             ? 0
             : 1;
  } else {
    throw std::invalid_argument("simulate: unknown mode " + mode);
  }
  finish(m, results, args.out_dir + "/simulate.json", t0);
  return rc;
}

int cmd_recurrence(const CommonArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  jf::KeyValueConfig cfg = load_config(args.config_path);
  jf::ModelParams model = jf::model_from_config(cfg);
  jf::RecurrenceInput in = jf::recurrence_input_from_model(model);
  const std::string coeffs = get_str(cfg, "coefficients", "model");
  if (coeffs == "boundary_growth")
    jf::set_boundary_growth_coefficients(in, false);
  else if (coeffs == "boundary_growth_critical")
    jf::set_boundary_growth_coefficients(in, true);
  if (cfg.count("diffusion_c") > 0) {
    in.has_diffusion = true;
    in.diffusion_bound =
        jf::RadialBound{get_num(cfg, "diffusion_c", 1.0), get_num(cfg, "diffusion_growth", 0.0),
                        get_num(cfg, "diffusion_log_pow", 0.0), 0.0};
  }

  std::vector<double> s_grid;
  for (int k = 1; k <= 15; ++k) s_grid.push_back(std::pow(2.0, k));

  std::ostringstream csv;
  csv.precision(17);
  csv << "s,small_part,big_inner,big_tail,local_part,total\r\n";
  nlohmann::json res;
  std::vector<double> totals;
  for (double s : s_grid) {
    jf::NTerms t = jf::n_of_s(in, s);
    csv << s << "," << t.small_part << "," << t.big_inner << "," << t.big_tail << ","
        << t.local_part << "," << t.total << "\r\n";
    totals.push_back(t.total);
  }
  jf::write_text_file(args.out_dir + "/recurrence_ns.csv", csv.str());

  const std::string fam = get_str(cfg, "l_family", "log");
  jf::LFamily family = jf::LFamily::log_family;
  double kappa = 0.0;
  if (fam == "log_loglog")
    family = jf::LFamily::log_loglog;
  else if (fam.rfind("power", 0) == 0) {
    family = jf::LFamily::power;
    kappa = get_num(cfg, "l_kappa", 0.0);
  }
  jf::SlowlyVaryingL L = jf::fit_L(in, family, kappa, s_grid);
  jf::IntegralTestReport test = jf::integral_test(L, in.r0, 1e12);

  const double r_chain = get_num(cfg, "chain_r", 4.0);
  const double c0 = get_num(cfg, "chain_c0", 3.0);
  nlohmann::json chains = nlohmann::json::array();
  bool chain_ok = true;
  for (int k = 1; k <= 3; ++k) {
    const double R = std::pow(2.0 * c0, k) * r_chain;
    jf::CapacityChain ch = jf::capacity_chain_bound(in, L, r_chain, R, c0);
    chain_ok = chain_ok && ch.bound_holds;
    chains.push_back(nlohmann::json::parse(ch.to_json()));
  }

  res["n_of_s"] = {{"s_grid", s_grid}, {"totals", totals}};
  res["fitted_L"] = {{"family", L.name()}, {"constant", L.c}};
  res["integral_test"] = nlohmann::json::parse(test.to_json());
  res["capacity_chains"] = chains;
  jf::RunManifest m = make_manifest("recurrence", cfg, 0);
  m.outputs.push_back(args.out_dir + "/recurrence_ns.csv");
  finish(m, res.dump(), args.out_dir + "/recurrence.json", t0);
  return chain_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for symmetric jump-process recurrence/transience analysis"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string mode = "big";
  bool log_events = false;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* copt = sub->add_option("--config", args.config_path, "config file (key=value or JSON)");
    if (config_required) copt->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
      args.seed_set = true;
    });
    sub->add_option("--threads", args.threads, "worker threads");
    sub->add_option("--tol", args.tol, "quadrature tolerance");
  };

  CLI::App* classify = app.add_subcommand("classify", "analytic recurrence/transience verdict");
  add_common(classify, true);
  CLI::App* drift = app.add_subcommand("drift", "small-jump Lyapunov drift profile");
  add_common(drift, true);
  CLI::App* lambda = app.add_subcommand("lambda", "big-jump limit functional suite");
  add_common(lambda, true);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo hitting/Dynkin runs");
  add_common(simulate, true);
  simulate->add_option("--mode", mode, "big | dynkin | small-eps");
  simulate->add_flag("--events", log_events, "write per-path event CSV (first paths)");
  CLI::App* recurrence = app.add_subcommand("recurrence", "integral-test and capacity chain");
  add_common(recurrence, true);
  CLI::App* identities = app.add_subcommand("identities", "gamma/digamma series identity suite");
  add_common(identities, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(args);
    if (drift->parsed()) return cmd_drift(args);
    if (lambda->parsed()) return cmd_lambda(args);
    if (simulate->parsed()) return cmd_simulate(args, mode, log_events);
    if (recurrence->parsed()) return cmd_recurrence(args);
    if (identities->parsed()) return cmd_identities(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
