#pragma once

#include <iosfwd>

namespace nocsit::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,           // usage or precondition error
    kMathematical = 2,    // unprovable / violated
    kNegativeResult = 3,  // e.g. point outside a region
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nocsit::cli
