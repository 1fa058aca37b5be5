#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levysp::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kUnsupported = 3, kNumerical = 4 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levysp::cli
