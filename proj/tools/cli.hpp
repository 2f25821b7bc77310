#pragma once

#include <iosfwd>

namespace sibuya::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidArguments = 1,
  kPreconditionViolation = 2,
  kVerifyFailure = 3,
};

/// Parses argv, runs one subcommand and writes its output to `out` (or to the
/// --out file). Diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sibuya::cli
