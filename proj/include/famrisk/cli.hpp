#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace famrisk::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kInfeasible = 2,
  kIoError = 3,
};

// Environment variable consulted for the default seed of `simulate` and
// `report`.
inline constexpr const char* kSeedEnvVar = "FAMRISK_SEED";
inline constexpr unsigned long long kDefaultSeed = 20170419ULL;

// Runs one command line (without the program name). Subcommands:
// solve, fit-beta, curves, simulate, report.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace famrisk::cli
