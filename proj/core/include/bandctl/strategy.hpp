// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bandctl {

enum class StrategyKind { Doshi, TypeOne, TypeTwo };

std::string_view to_string(StrategyKind kind) noexcept;

/// Lower band: switch down at y2 (phase 2 -> 1 below), up at y1, and restart
/// after a shutdown in phase 1 below y3. Doshi is the case y3 == y2.
struct BandOne {
  double y2 = 0.0;
  double y3 = 0.0;
  double y1 = 0.0;
};

/// BandOne plus an upper phase-1 non-action component (y4, b).
struct BandTwo {
  double y2 = 0.0;
  double y3 = 0.0;
  double y1 = 0.0;
  double y4 = 0.0;

  BandOne lower() const noexcept { return {y2, y3, y1}; }
};

/// Smallest admissible gap between y3 and y1.
inline constexpr double kMinGap = 1e-9;

/// Throws InvalidBand unless 0 <= y2 <= y3 < y1 < b.
void check_band(const BandOne& band, double b);
void check_band(const BandTwo& band, double b);

/// Threshold description shared by the analytic surfaces, the verifier and the CLI.
struct BandStrategy {
  StrategyKind kind = StrategyKind::Doshi;
  double y2 = 0.0;
  double y3 = 0.0;
  double y1 = 0.0;
  std::optional<double> y4;

  static BandStrategy from(const BandOne& band);
  static BandStrategy from(const BandTwo& band);

  BandOne lower() const noexcept { return {y2, y3, y1}; }
  /// Phase 1 switches to phase 2 at x.
  bool switches_high_to_low(double x) const noexcept;
  /// Phase 2 switches to phase 1 at x.
  bool switches_low_to_high(double x) const noexcept;
  /// After a shutdown, restart in phase 1 when landing at x.
  bool restarts_high(double x) const noexcept;
  /// The distinct thresholds in increasing order.
  std::vector<double> thresholds() const;
};

}  // namespace bandctl
