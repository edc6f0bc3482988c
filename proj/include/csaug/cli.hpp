#pragma once

#include <iosfwd>

namespace csaug::cli {

/// Exit codes of the `csaug` tool.
enum ExitCode : int {
  kOk = 0,
  kDataError = 1,
  kProviderError = 2,
  kUsageError = 64,
};

/// Entry point of the `csaug` tool. Data goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csaug::cli
