#pragma once

// The belle-paire command line, callable in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace belle::cli {

enum ExitCode : int { ok = 0, refused = 1, malformed = 2, precondition = 3 };

/// Parses `args` (without the program name), runs the subcommand, and
/// returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory of regression baselines: $BELLE_PAIRE_BASELINES or the source tree's baselines/.
std::string baseline_dir();

}  // namespace belle::cli
