// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string bin_path() {
  const char* p = std::getenv("JUMPFORM_BIN");
  REQUIRE(p != nullptr);
  return p;
}

int run_cli(const std::string& args) {
  std::string cmd = bin_path() + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json results_of(const std::string& path) {
  return nlohmann::json::parse(slurp(path))["results"];
}

// the numeric body: full report minus the volatile manifest timestamps
std::string stripped_report(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  j["manifest"].erase("generated_at");
  j["manifest"].erase("wall_ms");
  return j.dump();
}

const char* kTmp = "/tmp/jumpform_cli_test";

}  // namespace

TEST_CASE("cli end to end") {
  REQUIRE(std::system(("mkdir -p " + std::string(kTmp)).c_str()) == 0);
  const std::string out = std::string("--out ") + kTmp;

  SUBCASE("classify follows the threshold table") {
    // p' = -1 <= 1 and q' = 0.4 <= beta - d = 0.5: recurrent
    write_file(std::string(kTmp) + "/rec.cfg",
               "d = 1\nalpha = 1.0\nbeta = 1.5\np = -0.5\nq = 0.2\n");
    CHECK(run_cli("classify --config " + std::string(kTmp) + "/rec.cfg " + out) == 0);
    auto r = results_of(std::string(kTmp) + "/classify.json");
    CHECK(r["verdict"] == "recurrent");

    // q' = 0.6 > 0.5: transient
    write_file(std::string(kTmp) + "/tr.cfg",
               "d = 1\nalpha = 1.0\nbeta = 1.5\np = -0.5\nq = 0.3\n");
    CHECK(run_cli("classify --config " + std::string(kTmp) + "/tr.cfg " + out) == 0);
    CHECK(results_of(std::string(kTmp) + "/classify.json")["verdict"] == "transient");

    // diffusion exponent r = 1.5 > 2 - d = 1: transient
    write_file(std::string(kTmp) + "/diff.cfg",
               "d = 1\nalpha = 1.0\nbeta = 1.5\np = -0.5\nq = 0.2\nr_diff = 1.5\n");
    CHECK(run_cli("classify --config " + std::string(kTmp) + "/diff.cfg " + out) == 0);
    CHECK(results_of(std::string(kTmp) + "/classify.json")["verdict"] == "transient");
  }

  SUBCASE("malformed config exits 2") {
    write_file(std::string(kTmp) + "/bad.cfg", "d = 1\nalpha = banana\n");
    CHECK(run_cli("classify --config " + std::string(kTmp) + "/bad.cfg " + out) == 2);
    CHECK(run_cli("classify --config " + std::string(kTmp) + "/nonexistent.cfg " + out) == 2);
  }

  SUBCASE("simulate rejects q >= alpha/2 with exit 2") {
    write_file(std::string(kTmp) + "/badq.cfg",
               "d = 1\nalpha = 1.2\nbeta = 1.2\np = 0\nq = 0.7\nn_paths = 10\nmax_jumps = 100\n");
    CHECK(run_cli("simulate --config " + std::string(kTmp) + "/badq.cfg " + out) == 2);
  }

  SUBCASE("identities suite passes") {
    CHECK(run_cli("identities " + out) == 0);
    auto r = results_of(std::string(kTmp) + "/identities.json");
    CHECK(r["pass"] == true);
    CHECK(r["worst_abs_err"].get<double>() <= 1e-8);
  }

  SUBCASE("lambda run emits the invariant quantities") {
    write_file(std::string(kTmp) + "/lam.cfg",
               "d = 2\nalpha = 1.0\nbeta = 1.0\np = 0\nq = -0.5\ndelta = 0.1\n");
    CHECK(run_cli("lambda --config " + std::string(kTmp) + "/lam.cfg " + out) == 0);
    auto r = results_of(std::string(kTmp) + "/lambda.json");
    CHECK(std::abs(r["lambda_prime_at_zero"].get<double>()) <= 1e-6);
    CHECK(slurp(std::string(kTmp) + "/lambda.csv").find("lambda_prime") !=
          std::string::npos);
  }

  SUBCASE("drift run writes CSV and passes its invariant") {
    write_file(std::string(kTmp) + "/drift.cfg",
               "d = 3\nalpha = 1.0\nbeta = 1.0\np = 0\nq = 0\ndelta = 0.2\n");
    CHECK(run_cli("drift --config " + std::string(kTmp) + "/drift.cfg " + out) == 0);
    auto r = results_of(std::string(kTmp) + "/drift.json");
    CHECK(r["all_negative_beyond_M"] == true);
    CHECK(slurp(std::string(kTmp) + "/drift.csv").rfind("radius,raw,normalized", 0) == 0);
  }

  SUBCASE("expectation mismatch exits 1") {
    write_file(std::string(kTmp) + "/exp.cfg",
               "d = 1\nalpha = 1.2\nbeta = 1.2\np = 0\nq = 0.3\nx0_norm = 100\nr_hit = 1\n"
               "n_paths = 50\nmax_jumps = 2000\nseed = 5\nexpect = recurrent\n");
    CHECK(run_cli("simulate --config " + std::string(kTmp) + "/exp.cfg " + out) == 1);
  }

  SUBCASE("manifest reproducibility and rerun-from-report") {
    write_file(std::string(kTmp) + "/sim.cfg",
               "d = 1\nalpha = 1.2\nbeta = 1.2\np = 0\nq = 0\nx0_norm = 50\nr_hit = 1\n"
               "n_paths = 300\nmax_jumps = 5000\nseed = 31\n");
    CHECK(run_cli("simulate --config " + std::string(kTmp) + "/sim.cfg " + out) == 0);
    std::string first = stripped_report(std::string(kTmp) + "/simulate.json");
    REQUIRE(std::system(("cp " + std::string(kTmp) + "/simulate.json " + kTmp + "/first.json").c_str()) == 0);
    CHECK(run_cli("simulate --config " + std::string(kTmp) + "/sim.cfg " + out) == 0);
    CHECK(stripped_report(std::string(kTmp) + "/simulate.json") == first);
    // re-run from the emitted report itself
    CHECK(run_cli("simulate --config " + std::string(kTmp) + "/first.json " + out) == 0);
    CHECK(stripped_report(std::string(kTmp) + "/simulate.json") == first);
  }

  SUBCASE("event log flag writes per-path CSV") {
    write_file(std::string(kTmp) + "/ev.cfg",
               "d = 1\nalpha = 1.2\nbeta = 1.2\np = 0\nq = 0\nx0_norm = 20\nr_hit = 1\n"
               "n_paths = 5\nmax_jumps = 500\nseed = 3\n");
    CHECK(run_cli("simulate --events --config " + std::string(kTmp) + "/ev.cfg " + out) == 0);
    CHECK(slurp(std::string(kTmp) + "/simulate_events.csv")
              .rfind("path,time,x_norm,jump_norm", 0) == 0);
  }
}
