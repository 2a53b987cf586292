#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace voi::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kUsage = 2 };

/// Runs `voi <args...>` (args excludes the program name). Results go to
/// `out` unless --output redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voi::cli
