#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stpp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,        // fitting failed (rank deficiency, overflow, empty pattern, ...)
    kUsage = 2,          // bad flags, unparsable input, model/schema mismatch
    kIo = 3,             // unreadable or unwritable files
    kNotConverged = 4,   // fit written, but IRLS hit its iteration limit
};

// Runs the command line `args` (without the program name). Normal output
// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stpp::cli
