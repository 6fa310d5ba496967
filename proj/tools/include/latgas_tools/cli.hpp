#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latgas::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUnsatisfied = 1,
  kInputError = 2,
  kCapabilityError = 3,
  kNumericalFailure = 4,
  kThresholdBreach = 5,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latgas::cli
