// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bandctl/cli/config_io.hpp"
#include "bandctl/simulate.hpp"
#include "bandctl/strategy.hpp"
#include "bandctl/surface.hpp"
#include "bandctl/verify.hpp"

namespace bandctl::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct VerificationSummary {
  bool pass = false;
  double tolerance = 0.0;
  std::string worst_kind;
  double worst_value = 0.0;
  double worst_x = 0.0;
  BoundaryChecks boundary;
  std::vector<std::string> failures;

  static VerificationSummary from(const VerificationReport& r);
};

struct StageSummary {
  BandStrategy strategy;
  double objective = 0.0;
  int evaluations = 0;
  VerificationSummary verification;
};

/// Value of one phase at one level: analytic (absent for a backlog floor l < 0)
/// and Monte Carlo when requested.
struct PointRecord {
  double x = 0.0;
  Phase phase = Phase::High;
  std::optional<CostParts> analytic;
  std::optional<SimEstimate> simulated;
};

struct RunReport {
  std::string version = kToolVersion;
  std::string command;
  ModelConfig model;
  std::uint64_t seed = 0;
  std::optional<BandStrategy> strategy;
  std::optional<double> objective;
  std::optional<CostParts> level_b;
  std::optional<VerificationSummary> verification;
  std::vector<StageSummary> stages;
  std::vector<PointRecord> points;
  double timing_seconds = 0.0;
};

json to_json(const RunReport& r);
RunReport report_from_json(const json& j);

/// The report with the timing field removed, for byte comparisons.
json without_timing(json j);

}  // namespace bandctl::cli
