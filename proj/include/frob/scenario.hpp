#pragma once

// Scenario = (metric g, distribution E, domain box, numerics). Built-ins are
// registered by name; anything else is loaded from a JSON document:
//
// {
//   "name": "sphere_foliation",
//   "n": 3,
//   "r": 2,
//   "metric": ["1", "0", "0", "1", "0", "1"],      // g_ij, i <= j, row by row
//   "frame": [["0", "-x3", "x2"], ["x3", "0", "-x1"]],
//   "domain": {"lower": [-1, -1, 1], "upper": [1, 1, 3]},
//   "base_point": [0, 0, 2],                       // optional, default box center
//   "numerics": {                                  // optional, defaults shown
//     "step": 1e-3, "delta": 0.3, "epsilon": 0.5, "grid": 9, "seed": 42,
//     "frame_rule": "projected_transport",
//     "tolerances": {"chart_tangency": 1e-5}
//   }
// }

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frob/geometry.hpp"

namespace frob {

enum class FrameRule {
  projected_transport,  // parallel transport along the transverse geodesic, then P and re-orthonormalize
  projected_frame,      // Gram-Schmidt of E's declared fields at the displaced point
};

std::string to_string(FrameRule rule);
FrameRule frame_rule_from_string(const std::string& s);

struct Numerics {
  double step = 1e-3;
  double delta = 0.3;
  double epsilon = 0.5;
  int grid = 9;
  std::uint64_t seed = 42;
  FrameRule frame_rule = FrameRule::projected_transport;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

struct ScenarioConfig {
  std::string name;
  int n = 0;
  int r = 0;
  std::vector<std::string> metric;
  std::vector<std::vector<std::string>> frame;
  std::vector<double> lower;
  std::vector<double> upper;
  std::optional<std::vector<double>> base_point;
  Numerics numerics;
};

struct Scenario {
  ScenarioConfig config;
  MetricField g;
  DistributionSpec E;
  Vector base;  // p for leaves and charts

  const std::string& name() const { return config.name; }
  const Numerics& numerics() const { return config.numerics; }
};

// Throws ConfigError with the parser's byte position or the offending field.
ScenarioConfig parse_config(const std::string& json_text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path);

// Validates and materializes; throws ConfigError naming the field.
Scenario build_scenario(const ScenarioConfig& config);

std::vector<std::string> builtin_scenario_names();
std::optional<ScenarioConfig> builtin_config(const std::string& name);

// Built-in name first, otherwise a config file path.
Scenario resolve_scenario(const std::string& name_or_path);

std::string config_to_json(const ScenarioConfig& config);

}  // namespace frob
