#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wm::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,  ///< invalid variant, bad selector or usage, strict-parse rejection
    kIo = 2,
    kNumeric = 3,     ///< singular medium or ill-conditioned reference solve
};

/// Runs one command line (without the program name). Output goes to `out`,
/// diagnostics to `err`. `serve` blocks until the server stops.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wm::cli
