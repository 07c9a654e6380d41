#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hmp::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kRejected = 2,
  kIndeterminate = 3,
  kInconclusive = 4,
  kUnderlyingError = 5,
};

inline constexpr int kSchemaVersion = 1;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hmp::cli
