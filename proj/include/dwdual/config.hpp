#pragma once

// JSON run configuration. Unknown keys are rejected; every error message
// starts with the path of the offending field ("spec.R1: ...").
//
// {
//   "spec":      {"nu": 1, "lambda": 1, "R1": 2, "R2": 1, "n": 2},
//   "load":      {"type": "linear", "amplitude": 0.2}
//              | {"type": "table", "points": [[r, f], ...]},
//   "grid":      {"nodes": 2001},
//   "stability": {"max_mode": 8, "elements": 400},
//   "oracle":    {"enabled": true, "starts": 20, "seed": 42},
//   "output":    {"directory": "out", "formats": ["csv", "json", "modes", "plots"]}
// }

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwdual/problem.hpp"

namespace dwdual {

struct LoadConfig {
  std::string type = "linear";  // "linear" | "table"
  double amplitude = 0.0;
  std::vector<LoadSample> points;
};

struct RunConfig {
  ProblemSpec spec;
  LoadConfig load;
  std::size_t grid_nodes = 2001;
  int max_mode = 8;
  std::size_t elements = 400;
  bool oracle_enabled = true;
  int oracle_starts = 20;
  std::uint64_t oracle_seed = 42;
  std::string output_directory = "out";
  std::vector<std::string> formats = {"csv", "json", "modes"};

  bool wants(const std::string& format) const;
};

/// Throws Error(Config) with a field-path diagnostic.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);

/// The load described by the configuration (not yet validated).
LoadFunction build_load(const RunConfig& config);

}  // namespace dwdual
