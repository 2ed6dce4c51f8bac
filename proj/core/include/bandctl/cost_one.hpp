// SPDX-License-Identifier: MIT
#pragma once

#include <functional>

#include "bandctl/model.hpp"
#include "bandctl/quadrature.hpp"
#include "bandctl/strategy.hpp"
#include "bandctl/surface.hpp"

namespace bandctl {

struct EngineOptions {
  QuadratureOptions quad{};
};

/// Discounted phase-2 holding cost until the low-rate process leaves [y2, b].
double holding_exit_two_sided(const ValidatedModel& model, const BandOne& band, double x);

/// Discounted phase-1 holding cost until the process reflected at 0 reaches y1.
double holding_reflected(const ValidatedModel& model, const BandOne& band, double x);

/// Discounted shortage cost in phase 1 before reaching y1, including the
/// renewals at the floor.
double shortage_reflected(const ValidatedModel& model, const BandOne& band, double x);

/// One cost component of a type-one band: phase-1 values on [0, y1], phase-2
/// values on [y2, b], and the value at capacity with production off.
struct ComponentProfile {
  std::function<double(double)> phase1;
  std::function<double(double)> phase2;
  double level_b = 0.0;
};

ComponentProfile holding_assemble(const ValidatedModel& model, const BandOne& band,
                                  const EngineOptions& opt = {});
ComponentProfile shortage_assemble(const ValidatedModel& model, const BandOne& band,
                                   const EngineOptions& opt = {});
ComponentProfile switching_assemble(const ValidatedModel& model, const BandOne& band,
                                    const EngineOptions& opt = {});

/// The full cost surface of a Doshi or type-one band.
CostSurface total_cost(const ValidatedModel& model, const BandOne& band,
                       const EngineOptions& opt = {});

/// V0(b) alone; shares all work with total_cost but builds nothing else.
double level_b_objective(const ValidatedModel& model, const BandOne& band,
                         const EngineOptions& opt = {});

}  // namespace bandctl
