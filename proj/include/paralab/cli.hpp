#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paralab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitNegative = 1,  // refuted, invalid, or no model within the searched sizes
  kExitUnknown = 2,   // a budget ran out first
  kExitUsage = 64,
};

/// Runs one command line; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paralab
