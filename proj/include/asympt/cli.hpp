#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asympt::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_fail = 1, // verify verdict false, or an unexpected internal error
    exit_usage = 2,
    exit_unsupported = 3,
    exit_convergence = 4,
};

/// Runs one command line (without the program name). Output goes to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace asympt::cli
