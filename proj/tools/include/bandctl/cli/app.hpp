// SPDX-License-Identifier: MIT
#pragma once

#include <iosfwd>

namespace bandctl::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kNotVerified = 3,
  kNumeric = 4,
};

/// Runs one command line. Reports go to `out` (or --output), diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bandctl::cli
