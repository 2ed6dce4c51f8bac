// SPDX-License-Identifier: MIT
#pragma once

#include <memory>

#include "bandctl/model.hpp"
#include "bandctl/strategy.hpp"

namespace bandctl {

/// Holding, shortage and switching parts of one discounted cost.
struct CostParts {
  double holding = 0.0;
  double shortage = 0.0;
  double switching = 0.0;

  double total() const noexcept { return holding + shortage + switching; }

  friend CostParts operator+(const CostParts& a, const CostParts& b) noexcept {
    return {a.holding + b.holding, a.shortage + b.shortage, a.switching + b.switching};
  }
  friend CostParts operator*(const CostParts& a, double s) noexcept {
    return {a.holding * s, a.shortage * s, a.switching * s};
  }
};

double magnitude(const CostParts& p) noexcept;

/// Which side of a threshold to read a piecewise function from. Natural
/// follows the zone table: switching zones are closed, as in the strategy.
enum class Side { Natural, Left, Right };

namespace detail {
class SurfaceEngine {
 public:
  virtual ~SurfaceEngine() = default;
  virtual CostParts at(Phase phase, double x, Side side) const = 0;
  virtual CostParts level_b() const = 0;
  virtual const BandStrategy& strategy() const = 0;
};
}  // namespace detail

/// Per-phase cost functions of a band strategy plus the level-b values.
/// Cheap to copy; copies share the immutable engine.
class CostSurface {
 public:
  explicit CostSurface(std::shared_ptr<const detail::SurfaceEngine> engine)
      : engine_(std::move(engine)) {}

  /// Components of V_phase(x) for x in [0, b]; at b this is the left limit.
  CostParts at(Phase phase, double x, Side side = Side::Natural) const {
    return engine_->at(phase, x, side);
  }
  double total(Phase phase, double x, Side side = Side::Natural) const {
    return at(phase, x, side).total();
  }
  CostParts level_b() const { return engine_->level_b(); }
  double objective() const { return level_b().total(); }
  const BandStrategy& strategy() const { return engine_->strategy(); }

 private:
  std::shared_ptr<const detail::SurfaceEngine> engine_;
};

}  // namespace bandctl
