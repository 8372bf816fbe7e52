#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace hslab::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kInadmissible = 2, kSolverFailure = 3 };

struct CommandContext {
  RunConfig config;
  std::filesystem::path out;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::ostream* stdout_stream = nullptr;
};

int cmd_constants(const CommandContext& ctx);
int cmd_weights(const CommandContext& ctx);
int cmd_bridge(const CommandContext& ctx);
int cmd_solve(const CommandContext& ctx);
int cmd_bubble(const CommandContext& ctx);
int cmd_continue(const CommandContext& ctx);
int cmd_blowup(const CommandContext& ctx);
int cmd_verify(const CommandContext& ctx);
int cmd_sweep(const CommandContext& ctx);

struct SweepOutput {
  std::string rows_csv;
  std::string verdicts_csv;  ///< empty unless the p axis has two or more values
  std::size_t rows = 0;
  std::size_t succeeded = 0;
};

/// Solves every point of the sweep grid (gamma, s, lambda, p, node_target;
/// node_target varies fastest) and formats the rows in grid order.
SweepOutput run_sweep(const RunConfig& config, unsigned workers);

/// Runs a subcommand by name and maps exceptions to exit codes, printing the
/// message to stderr.
int dispatch(const std::string& name, const CommandContext& ctx);

}  // namespace hslab::cli
