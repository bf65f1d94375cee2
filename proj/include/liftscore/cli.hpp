#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "liftscore/errors.hpp"

namespace liftscore::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kIngestError = 3,
  kFitError = 4,
  kDomainError = 5,
};

int exit_code_for(ErrorKind kind);

/// Runs `liftscore <args...>` (args excludes the program name). Normal
/// output goes to `out`; warnings and the machine-readable error line go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liftscore::cli
