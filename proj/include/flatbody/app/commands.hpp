#pragma once

// Subcommands of the flatbody executable. Each returns the process exit
// code: 0 success, 1 config or usage error, 2 flagged runtime termination,
// 3 no stationary solution.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace flatbody::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitFlagged = 2, kExitNoSolution = 3 };

struct CommandOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int cmd_simulate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_stationary(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// `perturb_eom` shifts one coefficient of the closed-form field for the
/// duration of the run (mutation test hook).
int cmd_check(const CommandOptions& options, std::ostream& out, std::ostream& err,
              double perturb_eom = 0.0);

/// Nine numbers, row-major Φ.
int cmd_decompose(const std::vector<std::string>& matrix_args, const CommandOptions& options,
                  std::ostream& out, std::ostream& err);

}  // namespace flatbody::app
