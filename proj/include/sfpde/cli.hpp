#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfpde {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitIndeterminate = 3,
  kExitResonance = 4,
  kExitCriterionFails = 5,
  kExitHypothesesFail = 6,
  kExitInconclusive = 7,
};

/// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfpde
