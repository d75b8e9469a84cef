#pragma once

#include <ostream>

namespace etr::cli {

/// Exit codes of the etr tool.
enum ExitCode : int {
    kOk = 0,
    kInvalid = 1,            // parse or validation error
    kContractViolation = 2,  // fixpoint, rank descent, consistency or agreement failure
    kFuelExhausted = 3,
};

/// Runs `etr <eval|probe|check|trace> ...`; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace etr::cli
