// SPDX-License-Identifier: MIT
#pragma once

#include "bandctl/cost_one.hpp"

namespace bandctl {

/// Discounted phase-1 holding cost until the high-rate process leaves [y4, b].
double holding_exit_phase1(const ValidatedModel& model, const BandTwo& band, double x);

/// Phase-1 components on the upper non-action component (y4, b), given the
/// type-one surface of band.lower().
CostParts upper_phase1_costs(const ValidatedModel& model, const BandTwo& band,
                             const CostSurface& type_one, double x,
                             const EngineOptions& opt = {});

/// The full cost surface of a type-two band.
CostSurface total_cost_two(const ValidatedModel& model, const BandTwo& band,
                           const EngineOptions& opt = {});

}  // namespace bandctl
