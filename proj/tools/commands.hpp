#pragma once

#include <ostream>

namespace elicit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kUsageError = 2,
  kNegative = 3,
};

/// Entry point of the `elicit` executable, with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace elicit::cli
