// SPDX-License-Identifier: MIT
#pragma once

#include <array>
#include <vector>

namespace bandctl {

/// Production phase. Off is only ever occupied at capacity.
enum class Phase : int { Off = 0, High = 1, Low = 2 };

constexpr int index(Phase p) noexcept { return static_cast<int>(p); }
constexpr Phase other(Phase p) noexcept {
  return p == Phase::High ? Phase::Low : Phase::High;
}

/// One exponential component of a (hyper)exponential demand law.
struct DemandAtom {
  double weight = 1.0;
  double rate = 1.0;
};

/// Demand size distribution: a finite mixture of exponentials.
/// A single atom with unit weight is the plain exponential law.
class DemandLaw {
 public:
  enum class Kind { Exponential, HyperExponential };

  DemandLaw() = default;
  static DemandLaw exponential(double rate);
  static DemandLaw hyper_exponential(std::vector<DemandAtom> atoms);

  Kind kind() const noexcept { return kind_; }
  const std::vector<DemandAtom>& atoms() const noexcept { return atoms_; }

  double mean() const noexcept;
  double density(double y) const noexcept;
  double cdf(double y) const noexcept;
  /// P(Y > y); equals 1 for y <= 0.
  double tail(double y) const noexcept;
  /// E[e^{-theta Y}], defined for theta > -min rate.
  double laplace(double theta) const noexcept;
  /// d/dtheta of laplace().
  double laplace_derivative(double theta) const noexcept;
  double min_rate() const noexcept;

 private:
  Kind kind_ = Kind::Exponential;
  std::vector<DemandAtom> atoms_{{1.0, 1.0}};
};

/// h(x) = a + c x, cost per unit time.
struct HoldingCost {
  double a = 0.0;
  double c = 0.0;
  double operator()(double x) const noexcept { return a + c * x; }
};

/// p(y) = p0 + p1 y, cost per lost demand of size y.
struct PenaltyCost {
  double p0 = 0.0;
  double p1 = 0.0;
  double operator()(double y) const noexcept { return p0 + p1 * y; }
};

/// Switching costs K(i,j) from phase i to phase j; the diagonal is unused.
struct SwitchMatrix {
  std::array<std::array<double, 3>, 3> k{};

  double operator()(Phase from, Phase to) const noexcept {
    return k[index(from)][index(to)];
  }
  double& at(Phase from, Phase to) noexcept { return k[index(from)][index(to)]; }
};

struct ModelConfig {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double lambda = 0.0;
  double q = 0.0;
  double b = 0.0;
  double l = 0.0;
  DemandLaw demand;
  HoldingCost h1;
  HoldingCost h2;
  double h0_b = 0.0;
  PenaltyCost penalty;
  SwitchMatrix switching;

  double sigma(Phase p) const noexcept { return p == Phase::High ? sigma1 : sigma2; }
  const HoldingCost& holding(Phase p) const noexcept { return p == Phase::High ? h1 : h2; }
};

/// Which engine the model is being validated for.
enum class Scope { Analytic, Simulation };

/// A configuration that passed validate(). Cheap to copy, immutable.
class ValidatedModel {
 public:
  const ModelConfig& config() const noexcept { return cfg_; }
  const ModelConfig* operator->() const noexcept { return &cfg_; }
  Scope scope() const noexcept { return scope_; }

 private:
  friend ValidatedModel validate(const ModelConfig&, Scope);
  ValidatedModel(ModelConfig cfg, Scope scope) : cfg_(std::move(cfg)), scope_(scope) {}
  ModelConfig cfg_;
  Scope scope_;
};

/// Checks every invariant of the configuration; throws bandctl::Error naming
/// the first one violated. A negative backlog floor is rejected only for the
/// analytic scope.
ValidatedModel validate(const ModelConfig& raw, Scope scope = Scope::Analytic);

/// log E[e^{theta X_1}] for the free process of the given phase.
double laplace_exponent(const ModelConfig& m, Phase phase, double theta);
double laplace_exponent_derivative(const ModelConfig& m, Phase phase, double theta);

/// Mean drift sigma_i - lambda E[Y].
double drift_mean(const ModelConfig& m, Phase phase);

/// Integral over (z, inf) of p(v - z) dF(v); closed form for exponential mixtures.
double penalty_tail(const ModelConfig& m, double z);

}  // namespace bandctl
