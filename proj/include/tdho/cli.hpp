#pragma once

#include <iosfwd>

namespace tdho {

// Exit statuses of the command-line front end.
enum ExitStatus : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitUsage = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

/// Parses argv, dispatches one of evolve / sweep / contour / fit / verify and
/// returns an ExitStatus. Data goes to `out` unless --out names a file;
/// diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tdho
