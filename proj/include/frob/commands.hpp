#pragma once

// Subcommands of the `frob` tool. Each writes its CSV products and a
// report.json into the output directory and returns the report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frob/parallel.hpp"
#include "frob/report.hpp"

namespace frob {

struct CommandOptions {
  std::string scenario;  // built-in name or config path
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  ExecPolicy policy = ExecPolicy::openmp;
};

struct CommandResult {
  Report report;
  std::vector<std::string> summary;  // human-readable lines for stdout
  int exit_code = 0;
};

const std::vector<std::string>& command_names();

// Loads the scenario, applies --seed/--step overrides and dispatches.
// Errors carry the scenario name and, where relevant, the probe.
CommandResult run_command(const std::string& command, const CommandOptions& options);

}  // namespace frob
