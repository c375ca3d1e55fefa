#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kljn::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitIo = 4,
    kExitVerification = 5,
    kExitKeyOutOfRange = 6,
};

/// Runs the command line `args` (program name excluded).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace kljn::cli
