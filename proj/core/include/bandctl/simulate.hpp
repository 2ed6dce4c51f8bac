// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bandctl/model.hpp"
#include "bandctl/strategy.hpp"

namespace bandctl {

/// [lo, hi], or [lo, hi) when open_hi is set.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool open_hi = false;

  bool contains(double x) const noexcept { return x >= lo && (open_hi ? x < hi : x <= hi); }
};

class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);

  bool contains(double x) const noexcept;
  /// Smallest left end strictly above x, or +inf.
  double next_entry_above(double x) const noexcept;
  bool intersects(const IntervalSet& other) const noexcept;
  /// True when every point of this set lies in other. Parts of other are
  /// taken to be separated, so each part here must fit inside a single one.
  bool inside(const IntervalSet& other) const noexcept;
  const std::vector<Interval>& parts() const noexcept { return parts_; }

 private:
  std::vector<Interval> parts_;
};

/// Switching zones and restart selection zone of a stationary band policy.
struct SimStrategy {
  IntervalSet switch_high_to_low;  // phase 1 -> 2
  IntervalSet switch_low_to_high;  // phase 2 -> 1
  IntervalSet restart_high;        // after shutdown, restart in phase 1 here

  static SimStrategy from(const BandStrategy& band, double b, double l = 0.0);
  /// Throws InvalidBand when the zones break the stationary-policy rules.
  void check() const;
};

struct PathCost {
  double holding = 0.0;
  double shortage = 0.0;
  double switching = 0.0;
  double total() const noexcept { return holding + shortage + switching; }
};

struct SimOptions {
  /// Truncation time; zero selects log(1e4)/q.
  double horizon = 0.0;
  int jobs = 1;
  /// Optional non-affine holding rate h(phase, x), integrated numerically.
  std::function<double(Phase, double)> holding_rate;
  /// Optional demand quantile function u -> F^{-1}(u) replacing the model's law.
  std::function<double(double)> demand_quantile;
};

double default_horizon(const ModelConfig& m) noexcept;

PathCost simulate_path(const ValidatedModel& model, const SimStrategy& strategy, double x0,
                       Phase phase0, std::uint64_t seed, const SimOptions& opt = {});

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  Estimate holding, shortage, switching;
  double truncation_horizon = 0.0;
};

struct SimStart {
  double x0 = 0.0;
  Phase phase = Phase::High;
};

/// Estimates for several starts at once. Every path that reaches the shutdown
/// state (b, Off) continues with a sample drawn once per path index and shared
/// by all starts; the state is identical there, so each estimate stays unbiased.
std::vector<SimEstimate> estimate_cost_many(const ValidatedModel& model,
                                            const SimStrategy& strategy,
                                            const std::vector<SimStart>& starts,
                                            std::size_t n_paths, std::uint64_t base_seed,
                                            const SimOptions& opt = {});

SimEstimate estimate_cost(const ValidatedModel& model, const SimStrategy& strategy, double x0,
                          Phase phase0, std::size_t n_paths, std::uint64_t base_seed,
                          const SimOptions& opt = {});

/// Stream seed of path i; distinct base seeds give unrelated streams.
std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t path) noexcept;

struct OccupationHistogram {
  std::vector<double> edges;      // bins+1 edges spanning [a, d]
  std::vector<double> density;    // discounted occupation per unit length
  std::vector<double> std_error;  // of density
  Estimate total_mass;
};

/// Discounted occupation density of one phase's free process killed on
/// leaving [a, d].
OccupationHistogram estimate_occupation(const ValidatedModel& model, Phase phase, double a,
                                        double d, double x0, std::size_t n_paths, int bins,
                                        std::uint64_t base_seed, const SimOptions& opt = {});

/// One path of a phase's free process until it leaves [lower, upper], or,
/// with reflect_at_zero, until the process reflected at 0 reaches upper.
struct PassageSample {
  bool exited_up = false;
  double time = 0.0;            // horizon if neither boundary was reached
  double level = 0.0;           // position right after the exit
  double discount = 0.0;        // e^{-q time} on exit, 0 if truncated
  double lost_demand = 0.0;     // discounted demand lost at 0 (reflected case)
  double holding = 0.0;         // discounted holding cost of the phase
  double shortage = 0.0;        // discounted penalties at 0 (reflected case)
};

PassageSample simulate_passage(const ValidatedModel& model, Phase phase, double lower,
                               double upper, double x0, bool reflect_at_zero, std::uint64_t seed,
                               const SimOptions& opt = {});

/// Pairwise (cascade) sum; the order of additions depends only on the size.
double pairwise_sum(const double* v, std::size_t n) noexcept;

}  // namespace bandctl
