#include "frob/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frob {

using json = nlohmann::json;

std::string to_string(FrameRule rule) {
  switch (rule) {
    case FrameRule::projected_transport: return "projected_transport";
    case FrameRule::projected_frame: return "projected_frame";
  }
  return "unknown";
}

FrameRule frame_rule_from_string(const std::string& s) {
  if (s == "projected_transport") return FrameRule::projected_transport;
  if (s == "projected_frame") return FrameRule::projected_frame;
  throw ConfigError("numerics.frame_rule: unknown rule '" + s + "'");
}

namespace {

ScenarioConfig make(std::string name, int n, std::vector<std::string> metric, std::vector<std::vector<std::string>> frame,
                    std::vector<double> lower, std::vector<double> upper,
                    std::optional<std::vector<double>> base = std::nullopt) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.n = n;
  c.r = static_cast<int>(frame.size());
  c.metric = std::move(metric);
  c.frame = std::move(frame);
  c.lower = std::move(lower);
  c.upper = std::move(upper);
  c.base_point = std::move(base);
  return c;
}

const std::vector<std::string> kEuclidean3 = {"1", "0", "0", "1", "0", "1"};

std::vector<ScenarioConfig> builtins() {
  std::vector<ScenarioConfig> out;
  out.push_back(make("euclidean_planes", 3, kEuclidean3, {{"1", "0", "0"}, {"0", "1", "0"}}, {-1, -1, -1}, {1, 1, 1}));
  out.push_back(make("contact3d", 3, kEuclidean3, {{"0", "1", "0"}, {"1", "0", "x2"}}, {-1, -1, -1}, {1, 1, 1}));
  // Rotations about the x1 and x2 axes; they span the tangent planes of the
  // spheres centred at the origin wherever x3 != 0.
  out.push_back(make("sphere_foliation", 3, kEuclidean3, {{"0", "-x3", "x2"}, {"x3", "0", "-x1"}}, {-1, -1, 1},
                     {1, 1, 3}, std::vector<double>{0, 0, 2}));
  // dz² + f(z)²(dx² + dy²), f = e^z, leaves z = const.
  out.push_back(make("warped_product", 3, {"exp(2*x3)", "0", "0", "exp(2*x3)", "0", "1"},
                     {{"1", "0", "0"}, {"0", "1", "0"}}, {-1, -1, -1}, {1, 1, 1}));
  out.push_back(make("full_tm", 3, {"1 + 0.25*x1^2", "0.1*x2", "0", "1 + 0.2*sin(x3)", "0.05*x1*x2", "exp(0.3*x1)"},
                     {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}, {-1, -1, -1}, {1, 1, 1}));
  // Leaves are the level sets of x3 − ½ x2 sin(x1); the metric is not diagonal.
  out.push_back(make("twisted_levels", 3,
                     {"1 + 0.2*x2^2", "0.1*x3", "0", "1 + 0.1*x1^2", "0.05*x1*x2", "exp(0.3*x1)"},
                     {{"1", "0", "0.5*x2*cos(x1)"}, {"0", "1", "0.5*sin(x1)"}}, {-1, -1, -1}, {1, 1, 1}));
  // Rank one, so always involutive; the orthogonal planes form a contact
  // structure.
  out.push_back(make("line_field", 3, {"1", "0", "0", "1 + 0.2*x1^2", "0", "1"}, {{"1", "0", "x2"}}, {-1, -1, -1},
                     {1, 1, 1}));
  return out;
}

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string(key) + " required");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const auto& c : builtins()) names.push_back(c.name);
  return names;
}

std::optional<ScenarioConfig> builtin_config(const std::string& name) {
  for (auto& c : builtins())
    if (c.name == name) return c;
  return std::nullopt;
}

ScenarioConfig parse_config(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");

  ScenarioConfig c;
  c.name = j.value("name", source);
  c.n = required<int>(j, "n");
  c.r = required<int>(j, "r");
  c.metric = required<std::vector<std::string>>(j, "metric");
  c.frame = required<std::vector<std::vector<std::string>>>(j, "frame");
  if (!j.contains("domain")) throw ConfigError("domain required");
  c.lower = required<std::vector<double>>(j.at("domain"), "lower");
  c.upper = required<std::vector<double>>(j.at("domain"), "upper");
  if (j.contains("base_point")) c.base_point = j.at("base_point").get<std::vector<double>>();

  if (j.contains("numerics")) {
    const json& nj = j.at("numerics");
    Numerics& nm = c.numerics;
    nm.step = nj.value("step", nm.step);
    nm.delta = nj.value("delta", nm.delta);
    nm.epsilon = nj.value("epsilon", nm.epsilon);
    nm.grid = nj.value("grid", nm.grid);
    nm.seed = nj.value("seed", nm.seed);
    if (nj.contains("frame_rule")) nm.frame_rule = frame_rule_from_string(nj.at("frame_rule").get<std::string>());
    if (nj.contains("tolerances")) nm.tolerances = nj.at("tolerances").get<std::map<std::string, double>>();
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

Scenario build_scenario(const ScenarioConfig& c) {
  if (c.n < 1 || c.n > kMaxDim) throw ConfigError("n must be in [1, " + std::to_string(kMaxDim) + "]");
  if (c.r < 1 || c.r > c.n) throw ConfigError("r must satisfy 1 <= r <= n");
  if (static_cast<int>(c.metric.size()) != c.n * (c.n + 1) / 2)
    throw ConfigError("metric must list n(n+1)/2 = " + std::to_string(c.n * (c.n + 1) / 2) + " entries");
  if (static_cast<int>(c.frame.size()) != c.r) throw ConfigError("frame must list r fields");
  if (static_cast<int>(c.lower.size()) != c.n || static_cast<int>(c.upper.size()) != c.n)
    throw ConfigError("domain bounds must have n entries");
  for (int i = 0; i < c.n; ++i)
    if (!(c.lower[i] < c.upper[i])) throw ConfigError("domain box is empty along axis " + std::to_string(i + 1));
  const Numerics& nm = c.numerics;
  if (!(nm.step > 0.0)) throw ConfigError("numerics.step must be positive");
  if (!(nm.delta > 0.0)) throw ConfigError("numerics.delta must be positive");
  if (!(nm.epsilon > 0.0)) throw ConfigError("numerics.epsilon must be positive");
  if (nm.grid < 3 || nm.grid % 2 == 0) throw ConfigError("numerics.grid must be odd and at least 3");

  Box box;
  box.lo = Vector::Map(c.lower.data(), c.n);
  box.hi = Vector::Map(c.upper.data(), c.n);

  auto parse = [&](const std::string& text, const std::string& field) {
    try {
      return Expression::parse(text, c.n);
    } catch (const SyntaxError& e) {
      throw ConfigError(field + ": " + e.what());
    }
  };
  std::vector<Expression> upper;
  for (std::size_t i = 0; i < c.metric.size(); ++i)
    upper.push_back(parse(c.metric[i], "metric[" + std::to_string(i) + "]"));
  std::vector<std::vector<Expression>> fields;
  for (std::size_t a = 0; a < c.frame.size(); ++a) {
    if (static_cast<int>(c.frame[a].size()) != c.n)
      throw ConfigError("frame[" + std::to_string(a) + "] must have n components");
    std::vector<Expression> comps;
    for (std::size_t k = 0; k < c.frame[a].size(); ++k)
      comps.push_back(parse(c.frame[a][k], "frame[" + std::to_string(a) + "][" + std::to_string(k) + "]"));
    fields.push_back(std::move(comps));
  }

  Scenario s{c, MetricField(std::move(upper), box), DistributionSpec(std::move(fields)), box.center()};
  if (c.base_point) {
    if (static_cast<int>(c.base_point->size()) != c.n) throw ConfigError("base_point must have n entries");
    s.base = Vector::Map(c.base_point->data(), c.n);
    if (!box.contains(s.base)) throw ConfigError("base_point lies outside the domain");
  }
  try {
    metric_at(s.g, box.center());
    check_frame_independent(s.E, box.center());
  } catch (const Error& e) {
    throw ConfigError(std::string("at box center: ") + e.what());
  }
  return s;
}

Scenario resolve_scenario(const std::string& name_or_path) {
  if (auto c = builtin_config(name_or_path)) return build_scenario(*c);
  return build_scenario(load_config(name_or_path));
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["n"] = c.n;
  j["r"] = c.r;
  j["metric"] = c.metric;
  j["frame"] = c.frame;
  j["domain"] = {{"lower", c.lower}, {"upper", c.upper}};
  if (c.base_point) j["base_point"] = *c.base_point;
  j["numerics"] = {{"step", c.numerics.step},   {"delta", c.numerics.delta}, {"epsilon", c.numerics.epsilon},
                   {"grid", c.numerics.grid},   {"seed", c.numerics.seed},
                   {"frame_rule", to_string(c.numerics.frame_rule)}, {"tolerances", c.numerics.tolerances}};
  return j.dump(2);
}

}  // namespace frob
