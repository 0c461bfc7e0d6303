// frob: scenario-driven checks for the canonical connection of (g, E).

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "frob/commands.hpp"
#include "frob/errors.hpp"
#include "frob/scenario.hpp"

namespace {

void print(const frob::CommandResult& r) {
  for (const auto& c : r.report.checks)
    std::printf("%s  %-34s %-12.4g %s %-8.3g %s%s%s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.value,
                c.relation.c_str(), c.threshold, c.probe.c_str(), c.note.empty() ? "" : "  # ", c.note.c_str());
  for (const auto& n : r.report.notes) std::printf("note: %s\n", n.c_str());
  for (const auto& line : r.summary) std::printf("%s\n", line.c_str());
}

const std::map<std::string, std::string> kHelp{
    {"check-involutive", "bracket residual at the base point and on a grid"},
    {"connection", "Christoffels, torsion and curvature at probes"},
    {"compare", "distance to the comparison connections; Bott identity"},
    {"geodesic", "geodesic from the base point along a reference velocity"},
    {"transport", "parallel transport of the adapted frame"},
    {"jacobi", "Jacobi field by ODE and by variation of geodesics"},
    {"leaf", "sample the leaf through the base point"},
    {"chart", "build the straightening chart and its tangency residuals"},
    {"verify", "run every check; exit 1 on any failure"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical connection of a metric and a distribution: connections, curves, leaves, charts"};
  app.set_version_flag("--version", std::string(FROB_VERSION));
  app.require_subcommand(1);

  frob::CommandOptions opts;
  std::uint64_t seed = 0;
  double step = 0.0;
  bool serial = false;
  std::string chosen;

  for (const auto& name : frob::command_names()) {
    CLI::App* sub = app.add_subcommand(name, kHelp.at(name));
    sub->add_option("--scenario", opts.scenario, "built-in scenario name or JSON config path")->required();
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "probe seed (overrides the config)");
    sub->add_option("--step", step, "RK4 step h (overrides the config)");
    sub->add_flag("--serial", serial, "evaluate grids serially instead of with OpenMP");
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.add_subcommand("scenarios", "list built-in scenarios")->callback([&chosen] { chosen = "scenarios"; });

  CLI11_PARSE(app, argc, argv);

  if (chosen == "scenarios") {
    for (const auto& name : frob::builtin_scenario_names()) std::printf("%s\n", name.c_str());
    return 0;
  }
  CLI::App* sub = app.get_subcommand(chosen);
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--step")) opts.step = step;
  if (serial) opts.policy = frob::ExecPolicy::serial;

  try {
    const frob::CommandResult r = frob::run_command(chosen, opts);
    print(r);
    return r.exit_code;
  } catch (const frob::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
