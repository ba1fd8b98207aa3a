#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsheat {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

/// Parses the command line, runs the selected subcommand and returns the
/// process exit code. args[0] is the program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dsheat
