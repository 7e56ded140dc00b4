#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>

namespace salm::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitNumericalAbort = 3,
  kExitVerifyFailure = 4,
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;           // replaces the configured seed list
  std::optional<std::filesystem::path> out;    // replaces run.out
  std::optional<std::int64_t> budget;          // replaces termination.budget
};

/// Runs the solver for every seed and writes, per seed, seed_<s>.csv,
/// seed_<s>_steps.csv, seed_<s>_summary.json and, for shape problems, curve
/// files. Target curves go to target_<i>.txt.
int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Gradient harness, Lagrangian identity and cone suite for the configured
/// problem. Prints a JSON report on `out`.
int verify_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

int defaults_command(std::ostream& out);

}  // namespace salm::app
