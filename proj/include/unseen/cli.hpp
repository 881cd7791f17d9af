#pragma once

#include <iosfwd>

namespace unseen {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitInfeasible = 3 };

/// Runs the command line. Results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace unseen
