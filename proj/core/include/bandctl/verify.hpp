// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bandctl/model.hpp"
#include "bandctl/quadrature.hpp"
#include "bandctl/surface.hpp"

namespace bandctl {

struct OperatorOptions {
  double fd_step = 1e-5;
  /// Relative size of a one-sided slope mismatch that counts as a kink.
  double kink_ratio = 1e-3;
  QuadratureOptions quad{};
};

/// A one-sided slope estimate with the kink diagnosis behind it.
struct SlopeProbe {
  double left = 0.0;
  double right = 0.0;
  double central = 0.0;
  bool kink = false;
  /// Slope of the most demanding smooth function touching from above;
  /// NaN when no such function exists (convex kink).
  double supersolution_slope = 0.0;
};

SlopeProbe probe_slope(const std::function<double(double)>& w, double x,
                       const OperatorOptions& opt = {});

/// sigma_i w'(x) - (lambda + q) w(x) + lambda int_0^x w(x - a) dF(a)
///   + lambda int_x^inf p(a - x) dF(a) + lambda w(0) (1 - F(x)) + h_i(x).
/// The integral is split wherever x - a crosses one of the breaks.
double operator_L(const ValidatedModel& model, Phase phase,
                  const std::function<double(double)>& w, double slope, double x,
                  std::span<const double> breaks = {}, const OperatorOptions& opt = {});

/// Same with the slope estimated by finite differences (the supersolution
/// slope at a detected kink).
double operator_L(const ValidatedModel& model, Phase phase,
                  const std::function<double(double)>& w, double x,
                  std::span<const double> breaks = {}, const OperatorOptions& opt = {});

/// How the restart phase after a shutdown is chosen inside the L0 operator.
enum class Selection {
  Optimal,  // min over phases, as in the HJB system
  Policy,   // the strategy's own restart zones, which its surface satisfies exactly
};

double operator_L0(const ValidatedModel& model, const CostSurface& surface,
                   Selection selection = Selection::Optimal, const OperatorOptions& opt = {});

struct VerifyOptions {
  int grid = 400;
  int refine = 4;
  double tol = 5e-4;
  /// Multiply tol by max |V| over the grid.
  bool scale_tol = true;
  /// Points closer than this to a threshold only get the one-sided checks.
  double kink_exclusion = 1e-4;
  int jobs = 1;
  OperatorOptions op{};
};

struct BoundaryChecks {
  double w1_b = 0.0;  // V1(b-)
  double w2_b = 0.0;  // V2(b-)
  double w0_b = 0.0;  // V0(b)
  double slack1 = 0.0;  // w0 + K10 - w1
  double slack2 = 0.0;  // w0 + K20 - w2
  double l0 = 0.0;
};

struct VerificationReport {
  std::vector<double> grid;
  std::vector<double> residual_L1, residual_L2;
  std::vector<double> switch_slack_12, switch_slack_21;
  std::vector<bool> near_threshold;
  BoundaryChecks boundary;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> failures;

  /// Most negative HJB quantity seen and where.
  double worst_value = 0.0;
  double worst_x = 0.0;
  std::string worst_kind;
};

VerificationReport verify_strategy(const ValidatedModel& model, const CostSurface& surface,
                                   const VerifyOptions& opt = {});

}  // namespace bandctl
