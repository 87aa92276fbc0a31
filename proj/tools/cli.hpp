#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stein_pairs::cli {

enum ExitCode { kSuccess = 0, kNumericFailure = 1, kInputError = 2 };

// Runs the command line (without the program name). Reports go to --out when
// given, otherwise to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stein_pairs::cli
