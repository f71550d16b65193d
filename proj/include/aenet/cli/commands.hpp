#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aenet::cli {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;                 // overrides the section's out_dir when set
  std::optional<std::uint64_t> seed;   // overrides the section's seed
  std::optional<int> workers;          // overrides the section's workers
  std::vector<std::pair<std::string, std::string>> overrides;  // section key=value
};

/// Dispatch one subcommand (fit, path, simulate, benchmark, track).
/// Returns 0 iff all requested outputs were written; prints a structured
/// error to stderr and returns 1 otherwise.
int run_command(const std::string& command, const CommonFlags& flags);

}  // namespace aenet::cli
