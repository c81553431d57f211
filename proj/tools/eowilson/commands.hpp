#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "report.hpp"
#include "run_config.hpp"

namespace eowilson::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitCheckFailed = 3,
  kExitNotConverged = 4,
};

struct CommandOutput {
  std::vector<Row> rows;
  int exit_code = kExitOk;
};

// Runs one command. Library exceptions propagate.
CommandOutput run_command(const RunConfig& config);

CommandOutput cmd_check(const RunConfig& config);
CommandOutput cmd_bench(const RunConfig& config);
CommandOutput cmd_sweep(const RunConfig& config);
CommandOutput cmd_solve(const RunConfig& config);

// Whole driver: parse, run, write the report, map errors to exit codes.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace eowilson::cli
