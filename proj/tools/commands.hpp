#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace moft::cli {

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsage = 2 };

/// Runs the `moft` command line with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moft::cli
