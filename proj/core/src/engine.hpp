// SPDX-License-Identifier: MIT
// Internal: the type-one and type-two assemblies behind CostSurface.
#pragma once

#include <array>
#include <memory>
#include <vector>

#include "bandctl/cost_one.hpp"
#include "bandctl/passage.hpp"
#include "bandctl/scale.hpp"
#include "bandctl/surface.hpp"

namespace bandctl::detail {

/// c + m v, where v is the not-yet-known value at capacity.
struct Affine {
  double c = 0.0;
  double m = 0.0;

  double at(double v) const noexcept { return c + m * v; }
  friend Affine operator+(Affine a, Affine b) noexcept { return {a.c + b.c, a.m + b.m}; }
  friend Affine operator*(Affine a, double s) noexcept { return {a.c * s, a.m * s}; }
};

struct AffineParts {
  Affine holding, shortage, switching;

  friend AffineParts operator+(const AffineParts& a, const AffineParts& b) noexcept {
    return {a.holding + b.holding, a.shortage + b.shortage, a.switching + b.switching};
  }
  friend AffineParts operator*(const AffineParts& a, double s) noexcept {
    return {a.holding * s, a.shortage * s, a.switching * s};
  }
};

double magnitude(const AffineParts& p) noexcept;

/// Fixed-size vector so several integrals can share one set of nodes.
template <std::size_t N>
struct Lanes {
  std::array<double, N> v{};

  friend Lanes operator+(const Lanes& a, const Lanes& b) noexcept {
    Lanes r;
    for (std::size_t i = 0; i < N; ++i) r.v[i] = a.v[i] + b.v[i];
    return r;
  }
  friend Lanes operator*(const Lanes& a, double s) noexcept {
    Lanes r;
    for (std::size_t i = 0; i < N; ++i) r.v[i] = a.v[i] * s;
    return r;
  }
};

template <std::size_t N>
double magnitude(const Lanes<N>& l) noexcept {
  double m = 0.0;
  for (double x : l.v) m = std::max(m, std::abs(x));
  return m;
}

class TypeOneEngine final : public SurfaceEngine {
 public:
  TypeOneEngine(const ValidatedModel& model, const BandOne& band, const EngineOptions& opt);

  CostParts at(Phase phase, double x, Side side) const override;
  CostParts level_b() const override { return level_; }
  const BandStrategy& strategy() const override { return strategy_; }

  /// Phase-1 formulas, valid on [0, y1].
  AffineParts native_high(double x) const;
  /// Phase-2 formulas, valid on [y2, b].
  AffineParts native_low(double x) const;
  CostParts resolve(const AffineParts& p) const noexcept;

  double holding_low_local(double x) const;
  double holding_high_local(double x) const;
  double shortage_high_local(double x) const;
  /// Closed-form transfers of Z1 and Wbarbar1 out of [y2, b], on [y2, b].
  std::array<double, 2> transfer_closed(double x) const {
    const LowPieces p = low_pieces(x);
    return {p.omega_z, p.omega_w};
  }

  const ModelConfig& config() const noexcept { return m_; }
  const ScaleSet& high() const noexcept { return s1_; }
  const ScaleSet& low() const noexcept { return s2_; }
  const BandOne& band() const noexcept { return band_; }
  const EngineOptions& options() const noexcept { return opt_; }

 private:
  struct LowPieces {
    double r, exit_down, omega_z, omega_w, shortage_mu, shortage_gamma;
  };
  LowPieces low_pieces(double x) const;
  double reflected_shortage_direct(double x) const;
  Lanes<4> kernel_integrals(double x) const noexcept;
  double reflected_convolution(double x) const noexcept;
  void solve_level_b();

  ModelConfig m_;
  BandOne band_;
  BandStrategy strategy_;
  EngineOptions opt_;
  ScaleSet s1_, s2_;
  // Quantities that depend on the band only.
  double span_, w2_span_, z2_span_, zbar2_span_, wbar2_span_;
  double z1_y1_, w1_y1_, wbb1_y1_, w1_0_;
  std::array<double, 4> full_{};  // the [y2, b] integrals at x = b
  std::vector<double> penalty_coef_;  // penalty tail = sum coef_k e^{-mu_k z}
  double reflected_top_ = 0.0;
  double shortage_floor_ = 0.0;  // direct reflected shortage from 0
  double renewal_den_ = 1.0;
  // Landing payoffs below y2 as sums of coef_k e^{-mu_k (z - y2)}.
  std::vector<double> landing_coef_, restart_coef_;
  LowPieces at_y1_{};
  double holding_y1_ = 0.0, switching_y1_ = 0.0;  // x-free parts of the y1 values
  CostParts level_;
};

class TypeTwoEngine final : public SurfaceEngine {
 public:
  TypeTwoEngine(std::shared_ptr<const TypeOneEngine> base, double y4);

  CostParts at(Phase phase, double x, Side side) const override;
  CostParts level_b() const override { return base_->level_b(); }
  const BandStrategy& strategy() const override { return strategy_; }

  /// Phase-1 costs on [y4, b].
  CostParts upper(double x) const;
  double holding_upper_local(double x) const;

 private:
  CostParts landing(double y) const;

  std::shared_ptr<const TypeOneEngine> base_;
  double y4_;
  BandStrategy strategy_;
  double w1_span_;
  std::vector<CostParts> moment_;  // per demand atom
  CostParts floor_value_;
};

}  // namespace bandctl::detail
