// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "bandctl/model.hpp"

namespace bandctl {

/// One term omega * exp(theta x) of the exponential-sum scale function.
struct ScaleTerm {
  double weight = 0.0;
  double exponent = 0.0;
};

struct WFamily {
  double w = 0.0;        // W(x)
  double wbar = 0.0;     // integral of W over [0, x]
  double wbarbar = 0.0;  // integral of wbar over [0, x]
};

struct ZFamily {
  double z = 1.0;        // 1 + q wbar
  double zbar = 0.0;     // x + q wbarbar
  double z_theta = 1.0;  // exponentially tilted Z
};

/// The q-scale function of one phase's free process, W(x) = sum w_j e^{t_j x}
/// for x >= 0 and zero below. Immutable after construction.
class ScaleSet {
 public:
  ScaleSet(Phase phase, double q, double sigma, double lambda, DemandLaw demand,
           std::vector<ScaleTerm> terms);

  Phase phase() const noexcept { return phase_; }
  double q() const noexcept { return q_; }
  double sigma() const noexcept { return sigma_; }
  double phi_prime0() const noexcept { return phi_prime0_; }
  const std::vector<ScaleTerm>& terms() const noexcept { return terms_; }
  /// The unique positive exponent, usually written Phi(q).
  double largest_root() const noexcept { return largest_root_; }

  double phi(double theta) const noexcept;
  double phi_derivative(double theta) const noexcept;

  double W(double x) const noexcept;
  double Wbar(double x) const noexcept;
  double Wbarbar(double x) const noexcept;
  double Z(double x) const noexcept { return x < 0.0 ? 1.0 : 1.0 + q_ * Wbar(x); }
  double Zbar(double x) const noexcept { return x < 0.0 ? x : x + q_ * Wbarbar(x); }
  double Ztheta(double x, double theta) const noexcept;

 private:
  Phase phase_;
  double q_, sigma_, lambda_;
  DemandLaw demand_;
  std::vector<ScaleTerm> terms_;
  double phi_prime0_;
  double largest_root_;
};

/// Roots of phi(theta) = q and the residues 1/phi'(root).
ScaleSet build_scale(const ValidatedModel& model, Phase phase);

WFamily eval_W_family(const ScaleSet& s, double x) noexcept;
ZFamily eval_Z_family(const ScaleSet& s, double x, double theta = 0.0) noexcept;

/// |int_0^T e^{-theta x} W(x) dx - 1/(phi(theta) - q)| in closed form, with T
/// large enough that the neglected tail is below 1e-12. Requires
/// theta > largest_root().
double check_laplace_identity(const ScaleSet& s, double theta);

/// (e^{a x} - 1) / a, continuous at a = 0.
double expm1_ratio(double a, double x) noexcept;

}  // namespace bandctl
