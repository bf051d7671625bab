#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tancone::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kAccepted = 0,
  kRejected = 1,
  kViolated = 2,
  kInconclusive = 3,
  kUsage = 64,
  kFileError = 65,
};

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tancone::cli
