#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "frob/checks.hpp"
#include "frob/commands.hpp"
#include "frob/report.hpp"
#include "frob/scenario.hpp"
#include "test_support.hpp"

using namespace frob;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / ("frob_test_" + leaf);
  std::filesystem::remove_all(dir);
  return dir.string();
}

const char* kMinimal = R"({
  "name": "tilted",
  "n": 2, "r": 1,
  "metric": ["1", "0", "1"],
  "frame": [["1", "x1"]],
  "domain": {"lower": [-1, -1], "upper": [1, 1]}
})";

}  // namespace

TEST_CASE("built-in registry") {
  const auto names = builtin_scenario_names();
  for (const char* required : {"euclidean_planes", "contact3d", "sphere_foliation", "warped_product", "full_tm"})
    CHECK(std::find(names.begin(), names.end(), required) != names.end());

  const ScenarioConfig e = *builtin_config("euclidean_planes");
  CHECK(e.n == 3);
  CHECK(e.r == 2);
  CHECK(e.metric == std::vector<std::string>{"1", "0", "0", "1", "0", "1"});
  CHECK(e.frame == std::vector<std::vector<std::string>>{{"1", "0", "0"}, {"0", "1", "0"}});
  const ScenarioConfig c = *builtin_config("contact3d");
  CHECK(c.frame == std::vector<std::vector<std::string>>{{"0", "1", "0"}, {"1", "0", "x2"}});
  CHECK_FALSE(builtin_config("nope"));
}

TEST_CASE("config parsing fills defaults") {
  const ScenarioConfig c = parse_config(kMinimal);
  CHECK(c.name == "tilted");
  CHECK(c.numerics.step == 1e-3);
  CHECK(c.numerics.delta == 0.3);
  CHECK(c.numerics.epsilon == 0.5);
  CHECK(c.numerics.grid == 9);
  CHECK(c.numerics.seed == 42);
  const Scenario s = build_scenario(c);
  CHECK(s.base == test::vec({0, 0}));
  // Round trip through the serializer.
  const ScenarioConfig back = parse_config(config_to_json(c));
  CHECK(back.metric == c.metric);
  CHECK(back.frame == c.frame);
  CHECK(back.numerics.step == c.numerics.step);
}

TEST_CASE("config errors name the problem") {
  std::string text = kMinimal;
  text.replace(text.find("\"r\": 1,"), 7, "");
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("r required"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("{\"n\": 2,, }"), doctest::Contains("parse error at byte"), ConfigError);

  ScenarioConfig c = parse_config(kMinimal);
  c.metric[2] = "-1";
  CHECK_THROWS_AS(build_scenario(c), ConfigError);
  c = parse_config(kMinimal);
  c.frame[0][1] = "x1 +";
  CHECK_THROWS_WITH_AS(build_scenario(c), doctest::Contains("frame"), ConfigError);
  c = parse_config(kMinimal);
  c.r = 3;
  CHECK_THROWS_AS(build_scenario(c), ConfigError);
  c = parse_config(kMinimal);
  c.numerics.grid = 4;
  CHECK_THROWS_AS(build_scenario(c), ConfigError);
  c = parse_config(kMinimal);
  c.base_point = std::vector<double>{2.0, 0.0};
  CHECK_THROWS_AS(build_scenario(c), ConfigError);
}

TEST_CASE("number formatting and CSV output") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  const std::string dir = temp_dir("csv");
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir + "/a.csv", {"t", "x1"});
    w.row({0.5, 1.0 / 3.0});
    CHECK_THROWS_AS(w.row({1.0}), Error);
  }
  CHECK(slurp(dir + "/a.csv") == "t,x1\n0.5,0.33333333333333331\n");
}

TEST_CASE("probe generator is deterministic and stays in the shrunk box") {
  const Scenario s = test::builtin("sphere_foliation");
  const auto a = probe_points(s, 50, 42), b = probe_points(s, 50, 42), c = probe_points(s, 50, 43);
  CHECK(a == b);
  CHECK(a != c);
  const Box box = s.g.domain().shrunk(0.1);
  for (const Vector& p : a) CHECK(box.contains(p));
  ProbeRng rng(0);  // published SplitMix64 reference stream
  CHECK(rng.next() == 0xe220a8397b1dcdafULL);
  CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("reports are byte-identical across runs") {
  CommandOptions o;
  o.scenario = "twisted_levels";
  o.out_dir = temp_dir("report");
  const CommandResult first = run_command("connection", o);
  const std::string report = slurp(o.out_dir + "/report.json"), table = slurp(o.out_dir + "/connection.csv");
  const CommandResult second = run_command("connection", o);
  CHECK(slurp(o.out_dir + "/report.json") == report);
  CHECK(slurp(o.out_dir + "/connection.csv") == table);
  CHECK(first.report.to_json() == second.report.to_json());
  CHECK(report.find("\"artifact_version\"") != std::string::npos);
}

TEST_CASE("check-involutive flags the contact planes") {
  CommandOptions o;
  o.scenario = "contact3d";
  o.out_dir = temp_dir("invol");
  const CommandResult r = run_command("check-involutive", o);
  double base = -1, flag = -1;
  for (const auto& [k, v] : r.report.results) {
    if (k == "residual_at_base") base = v;
    if (k == "involutive") flag = v;
  }
  CHECK(std::abs(base - 1.0) <= 1e-9);
  CHECK(flag == 0.0);
  CHECK(r.exit_code == 0);
}

TEST_CASE("verify on the flat scenario passes") {
  CommandOptions o;
  o.scenario = "euclidean_planes";
  o.out_dir = temp_dir("verify");
  o.step = 1e-2;
  const CommandResult r = run_command("verify", o);
  for (const auto& c : r.report.checks) CHECK_MESSAGE(c.pass, c.id, " ", c.value);
  CHECK(r.exit_code == 0);
}

TEST_CASE("errors carry the scenario") {
  CommandOptions o;
  o.scenario = "no_such_scenario_file.json";
  o.out_dir = temp_dir("err");
  CHECK_THROWS_AS(run_command("geodesic", o), Error);
  o.scenario = "euclidean_planes";
  CHECK_THROWS_AS(run_command("bogus", o), ConfigError);
}
