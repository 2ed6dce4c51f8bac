// SPDX-License-Identifier: MIT
// Parameter sets shared by the unit and acceptance suites.
#pragma once

#include <cmath>

#include "bandctl/model.hpp"
#include "bandctl/strategy.hpp"

namespace bandctl::fixtures {

inline ModelConfig example_one() {
  ModelConfig m;
  m.sigma1 = 3.0;
  m.sigma2 = 1.5;
  m.lambda = 2.0;
  m.q = 0.1;
  m.b = 10.0;
  m.demand = DemandLaw::exponential(1.5);
  m.h1 = {0.041, 0.001};
  m.h2 = {0.021, 0.001};
  m.h0_b = 0.011;
  m.penalty = {0.8, 0.4};
  auto& k = m.switching;
  k.at(Phase::High, Phase::Low) = 1.0;
  k.at(Phase::Low, Phase::High) = 2.0;
  k.at(Phase::Low, Phase::Off) = 2.0;
  k.at(Phase::High, Phase::Off) = 4.0;
  k.at(Phase::Off, Phase::Low) = 2.0;
  k.at(Phase::Off, Phase::High) = 4.0;
  return m;
}

inline ModelConfig example_two() {
  ModelConfig m;
  m.sigma1 = 2.5;
  m.sigma2 = 2.2;
  m.lambda = 2.0;
  m.q = 0.1;
  m.b = 20.0;
  m.demand = DemandLaw::exponential(1.0);
  m.h1 = {0.03, 0.001};
  m.h2 = {0.02, 0.001};
  m.h0_b = 0.0202;
  m.penalty = {0.8, 0.4};
  auto& k = m.switching;
  k.at(Phase::High, Phase::Low) = 0.05;
  k.at(Phase::Low, Phase::High) = 0.05;
  k.at(Phase::Low, Phase::Off) = 0.005;
  k.at(Phase::High, Phase::Off) = 0.0055;
  return m;
}

inline ModelConfig example_three() {
  ModelConfig m;
  m.sigma1 = 3.5;
  m.sigma2 = 2.5;
  m.lambda = 2.0;
  m.q = 0.1;
  m.b = 10.0;
  m.demand = DemandLaw::exponential(1.0);
  m.h1 = {0.01, 0.12};
  m.h2 = {0.01, 0.12};
  m.h0_b = 1.01;
  m.penalty = {2.0, 1.1};
  auto& k = m.switching;
  k.at(Phase::High, Phase::Low) = 0.05;
  k.at(Phase::Low, Phase::High) = 0.05;
  k.at(Phase::High, Phase::Off) = 0.01;
  return m;
}

/// Constant holding c, no penalty, switching free up to the admissible minimum.
inline ModelConfig flat_model(double c) {
  ModelConfig m = example_one();
  m.h1 = {c, 0.0};
  m.h2 = {c, 0.0};
  m.h0_b = c;
  m.penalty = {0.0, 0.0};
  m.switching = SwitchMatrix{};
  // Validation needs K12 + K21 > 0; 1e-14 changes no total by more than 1e-12.
  m.switching.at(Phase::High, Phase::Low) = 1e-14;
  m.switching.at(Phase::Low, Phase::High) = 1e-14;
  return m;
}

// Thresholds reported for the three examples.
inline constexpr BandOne kReportedBandOne{1.526, 1.526, 5.077};
inline constexpr BandOne kReportedBandTwo{6.213, 9.805, 17.294};
inline constexpr BandTwo kReportedBandThree{2.468, 3.114, 4.610, 7.660};

/// |a - b| within k standard errors, plus a small absolute floor.
inline bool within_se(double estimate, double se, double exact, double k = 3.0,
                      double floor = 1e-9) {
  return std::abs(estimate - exact) <= k * se + floor;
}

}  // namespace bandctl::fixtures
