// SPDX-License-Identifier: MIT
#include "bandctl/errors.hpp"

namespace bandctl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonOrderedRates: return "NonOrderedRates";
    case ErrorCode::SwitchInequalityViolated: return "SwitchInequalityViolated";
    case ErrorCode::NegativeCost: return "NegativeCost";
    case ErrorCode::BacklogUnsupported: return "BacklogUnsupported";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidBand: return "InvalidBand";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::ThetaInsideSpectrum: return "ThetaInsideSpectrum";
    case ErrorCode::OutOfBand: return "OutOfBand";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::FixedPointNotContractive: return "FixedPointNotContractive";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RootFindingFailed:
    case ErrorCode::QuadratureNotConverged:
    case ErrorCode::FixedPointNotContractive:
      return false;
    default:
      return true;
  }
}

}  // namespace bandctl
