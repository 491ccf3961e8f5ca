#pragma once

#include <ostream>

namespace ladder::app {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kConfigError = 2,
  kNonConvergence = 3,
  kAnalyticDomain = 4,
};

/// Full command-line entry point: ladder <command> [flags]. Progress and
/// summaries go to `out`; errors to `err` as one JSON object per line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ladder::app
