// SPDX-License-Identifier: Apache-2.0
#include "jumpform/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace jumpform {

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool"] = "jumpform";
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["generated_at"] = m.generated_at;
  j["wall_ms"] = m.wall_ms;
  j["outputs"] = m.outputs;
  return j.dump(2);
}

std::string wrap_report(const RunManifest& m, const std::string& results_json) {
  nlohmann::json j;
  j["manifest"] = nlohmann::json::parse(manifest_to_json(m));
  j["results"] = nlohmann::json::parse(results_json);
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace jumpform
