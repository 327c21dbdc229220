#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirac::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kHypothesisViolation = 3,
};

/// Runs one subcommand. `args` excludes the program name. Reports go to the
/// --out directory; a one-line summary per report goes to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Subcommand names in the order they are listed by --help.
const std::vector<std::string>& subcommands();

}  // namespace dirac::cli
