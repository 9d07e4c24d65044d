#pragma once

namespace auvplan::cli {

enum ExitCode : int {
  kSuccess = 0,
  kRuntimeError = 1,
  kConfigError = 2,
  kStranded = 3,
  kTimedOut = 4,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv);

}  // namespace auvplan::cli
