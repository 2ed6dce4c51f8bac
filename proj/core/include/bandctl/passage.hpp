// SPDX-License-Identifier: MIT
#pragma once

#include "bandctl/quadrature.hpp"
#include "bandctl/scale.hpp"

namespace bandctl {

/// A phase's free process observed until it leaves [lower, upper].
class ExitContext {
 public:
  ExitContext(const ScaleSet& scale, double lower, double upper);

  const ScaleSet& scale() const noexcept { return *scale_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return d_; }
  /// W(d - a), the normaliser shared by every exit identity.
  double span_w() const noexcept { return w_span_; }

 private:
  const ScaleSet* scale_;
  double a_, d_, w_span_;
};

/// E_x[e^{-q tau_up}; up before down] = W(x-a)/W(d-a).
double up_crossing_factor(const ExitContext& ctx, double x);

/// E_x[e^{-q tau_down + theta (X - a)}; down before up] = Z(x-a, theta) - W(x-a)Z(d-a, theta)/W(d-a).
double exit_down(const ExitContext& ctx, double x, double theta = 0.0);

/// Resolvent density of the process killed on leaving [a, d].
double potential_density(const ExitContext& ctx, double x, double y);

/// E_x[e^{-q kappa}] with kappa the first passage above y1 of the process reflected at 0.
double reflected_up_factor(const ScaleSet& scale, double x, double y1);

/// Expected discounted local time at 0 (lost demand) before the reflected process reaches y1.
double reflected_local_time(const ScaleSet& scale, double x, double y1);

/// Payoffs paid to the phase-1 cost functions on exiting the low-rate band.
enum class TransferPayoff { Z1, Wbarbar1 };

/// x -> E_x[e^{-q tau_down} g(X_tau); down before up] for the low-rate
/// process on [y2, b], with g a phase-1 scale functional. The part of the
/// correction integral that does not depend on x is computed once.
class TransferOperator {
 public:
  TransferOperator(const ExitContext& low_band, const ScaleSet& high, TransferPayoff payoff,
                   const QuadratureOptions& quad = {});

  double operator()(double x) const;

 private:
  double payoff(double x) const noexcept;
  /// The generator difference (G2 - q) g evaluated at z.
  double generator_gap(double z) const noexcept;

  const ExitContext* ctx_;
  const ScaleSet* high_;
  TransferPayoff kind_;
  QuadratureOptions quad_;
  double g_upper_ = 0.0;     // g(d)
  double full_integral_ = 0.0;
};

double omega2(const ExitContext& low_band, const ScaleSet& high, TransferPayoff payoff, double x);

}  // namespace bandctl
