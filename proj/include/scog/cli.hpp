#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scog::cli {

enum ExitCode : int {
    Success = 0,
    Usage = 1,
    DataFailure = 2,
    CapacityFailure = 3,
    InternalFailure = 4,
};

// Runs the command line `args` (args[0] is the program name). Normal output
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace scog::cli
