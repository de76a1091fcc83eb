#pragma once

#include <iosfwd>

namespace tempconf::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kModelError = 3,
    kValidationFailed = 4,
};

// Entry point of the `tempconf` tool; normal output goes to `out`, diagnostics
// and rejected input rows to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tempconf::cli
