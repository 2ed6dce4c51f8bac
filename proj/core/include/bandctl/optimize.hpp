// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bandctl/cost_one.hpp"
#include "bandctl/strategy.hpp"
#include "bandctl/surface.hpp"
#include "bandctl/verify.hpp"

namespace bandctl {

struct NelderMeadOptions {
  double x_tol = 1e-4;  // simplex diameter, absolute
  double f_tol = 1e-8;  // spread of simplex values, absolute
  int max_evaluations = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free minimization of f. `project` maps any point to the
/// feasible set and is applied before every evaluation, so the returned point
/// is feasible. Evaluations returning NaN or throwing count as +inf.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::function<std::vector<double>(std::vector<double>)>& project,
                             std::vector<double> start, std::vector<double> step,
                             const NelderMeadOptions& opt = {});

/// Minimum of f on [lo, hi] by golden-section search.
double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol);

struct OptimizeOptions {
  int lattice_doshi = 25;
  int lattice_one = 15;
  int restarts = 4;
  std::uint64_t seed = 1;
  int jobs = 1;
  NelderMeadOptions polish{};
  /// Upper-component selection: probe points in (y1, b) and search tolerance.
  int y4_probes = 20;
  double y4_tol = 1e-4;
  EngineOptions engine{};
};

struct BandSearch {
  BandStrategy strategy;
  double objective = 0.0;  // V0(b)
  int evaluations = 0;
};

BandSearch optimize_doshi(const ValidatedModel& model, const OptimizeOptions& opt = {});
BandSearch optimize_type_one(const ValidatedModel& model, const OptimizeOptions& opt = {});
/// Keeps the type-one band and chooses y4 by the min-max probe rule.
BandSearch optimize_type_two(const ValidatedModel& model, const BandOne& lower,
                             const OptimizeOptions& opt = {});

/// Max over the probe grid of the phase-1 value when the upper component starts at y4.
double upper_component_score(const ValidatedModel& model, const BandOne& lower, double y4,
                             int probes, const EngineOptions& engine = {});

/// Cost surface of any band strategy.
CostSurface build_surface(const ValidatedModel& model, const BandStrategy& strategy,
                          const EngineOptions& engine = {});

struct EscalationStage {
  BandSearch search;
  VerificationReport report;
};

struct OptimizationResult {
  BandStrategy strategy;
  double objective = 0.0;
  CostParts level_b;
  VerificationReport report;
  bool verified = false;
  std::vector<EscalationStage> stages;
};

/// Optimizes within the classes from `first` up to `last`, verifying each
/// winner and moving to the next class only when verification fails.
OptimizationResult escalate(const ValidatedModel& model, StrategyKind first, StrategyKind last,
                            const OptimizeOptions& opt = {}, const VerifyOptions& vopt = {});

}  // namespace bandctl
