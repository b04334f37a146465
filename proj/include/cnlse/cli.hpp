#pragma once

#include <iosfwd>

namespace cnlse {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitBlowUp = 3,
    kExitIterationFailure = 4,
    kExitIoError = 5,
};

/// Entry point of the `cnlse` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cnlse
