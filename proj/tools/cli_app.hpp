#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cstk::cli {

enum ExitCode : int { kOk = 0, kVerifiedFalse = 1, kUsage = 2, kResourceCap = 3 };

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cstk::cli
