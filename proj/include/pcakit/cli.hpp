#pragma once

#include "pcakit/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace pcakit::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kDataError = 3,
  kNumericError = 4,
  kUnsupported = 5,
};

int exit_code_for(ErrorCode code);

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"fit", "--method", "pca", ...}. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcakit::cli
