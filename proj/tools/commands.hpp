#pragma once

#include <iosfwd>

namespace plastiq::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kSolverFailure = 3,
    kCertificateFailure = 4,
};

/// Parses argv and dispatches to a subcommand. Reports go to `out`,
/// diagnostics to `err`.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace plastiq::cli
