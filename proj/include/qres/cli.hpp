#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qres::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kCapacityError = 2,
  kOracleViolation = 3,
};

/// Runs one command. `args` excludes the program name. Human output goes to
/// `out`, errors to `err`; machine-readable reports go to the --out path.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qres::cli
