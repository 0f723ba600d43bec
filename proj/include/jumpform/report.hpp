// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace jumpform {

inline constexpr const char* kToolVersion = "0.1.0";

// Every emitted artifact embeds its manifest; re-running from a manifest
// reproduces the numeric body exactly (the volatile fields are the two
// timestamps below, which reproducibility comparisons strip).
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> config;  // full config echo
  uint64_t seed = 0;
  std::string generated_at;  // volatile
  double wall_ms = 0.0;      // volatile
  std::vector<std::string> outputs;
};

std::string manifest_to_json(const RunManifest& m);

// {"manifest": ..., "results": ...}; results_json must be a JSON value.
std::string wrap_report(const RunManifest& m, const std::string& results_json);

void write_text_file(const std::string& path, const std::string& content);
std::string iso_timestamp_now();

}  // namespace jumpform
