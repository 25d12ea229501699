#pragma once

#include <ostream>

namespace insq::cli {

enum ExitCode { kOk = 0, kUsage = 1, kVerifyFailed = 2, kRuntime = 3 };

// Entry point for `insq generate|run|verify|serve`. Output goes to `out`,
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace insq::cli
