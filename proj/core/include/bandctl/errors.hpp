// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bandctl {

enum class ErrorCode {
  // configuration problems
  NonOrderedRates,
  SwitchInequalityViolated,
  NegativeCost,
  BacklogUnsupported,
  InvalidParameter,
  InvalidBand,
  InvalidStart,
  ThetaInsideSpectrum,
  OutOfBand,
  NoFeasiblePoint,
  // numerical breakdowns
  RootFindingFailed,
  QuadratureNotConverged,
  FixedPointNotContractive,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for codes that describe a bad input rather than a numerical failure.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bandctl
