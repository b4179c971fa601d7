#pragma once

#include <ostream>

namespace simfix {

// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitFuzzFailures = 1,
    kExitParseError = 2,
    kExitNotSimilar = 3,
    kExitIsometry = 4,
    kExitConstructionFailed = 5,
    kExitWriteFailed = 6,
};

// Entry point shared by the `simfix` binary and the CLI tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simfix
