// SPDX-License-Identifier: MIT
#include "bandctl/scale.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "bandctl/errors.hpp"

namespace bandctl {

double expm1_ratio(double a, double x) noexcept {
  const double ax = a * x;
  if (std::abs(ax) < 1e-8) return x * (1.0 + 0.5 * ax);
  return std::expm1(ax) / a;
}

namespace {

// (e^{a x} - 1 - a x) / a^2 without cancellation for small a x.
double expm1_minus_linear(double a, double x) noexcept {
  const double ax = a * x;
  if (std::abs(ax) < 1e-3) {
    return x * x * (0.5 + ax * (1.0 / 6.0 + ax * (1.0 / 24.0 + ax / 120.0)));
  }
  return (std::expm1(ax) - ax) / (a * a);
}

}  // namespace

ScaleSet::ScaleSet(Phase phase, double q, double sigma, double lambda, DemandLaw demand,
                   std::vector<ScaleTerm> terms)
    : phase_(phase),
      q_(q),
      sigma_(sigma),
      lambda_(lambda),
      demand_(std::move(demand)),
      terms_(std::move(terms)),
      phi_prime0_(sigma - lambda * demand_.mean()),
      largest_root_(-std::numeric_limits<double>::infinity()) {
  for (const auto& t : terms_) largest_root_ = std::max(largest_root_, t.exponent);
}

double ScaleSet::phi(double theta) const noexcept {
  return sigma_ * theta - lambda_ + lambda_ * demand_.laplace(theta);
}

double ScaleSet::phi_derivative(double theta) const noexcept {
  return sigma_ + lambda_ * demand_.laplace_derivative(theta);
}

double ScaleSet::W(double x) const noexcept {
  if (x < 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight * std::exp(t.exponent * x);
  return s;
}

double ScaleSet::Wbar(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight * expm1_ratio(t.exponent, x);
  return s;
}

double ScaleSet::Wbarbar(double x) const noexcept {
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight * expm1_minus_linear(t.exponent, x);
  return s;
}

double ScaleSet::Ztheta(double x, double theta) const noexcept {
  if (x <= 0.0) return std::exp(theta * x);
  double inner = 0.0;
  for (const auto& t : terms_) inner += t.weight * expm1_ratio(t.exponent - theta, x);
  return std::exp(theta * x) * (1.0 + (q_ - phi(theta)) * inner);
}

WFamily eval_W_family(const ScaleSet& s, double x) noexcept {
  return {s.W(x), s.Wbar(x), s.Wbarbar(x)};
}

ZFamily eval_Z_family(const ScaleSet& s, double x, double theta) noexcept {
  return {s.Z(x), s.Zbar(x), s.Ztheta(x, theta)};
}

namespace {

std::vector<double> exponential_roots(double sigma, double lambda, double mu, double q) {
  // sigma t - lambda t/(mu+t) = q  <=>  sigma t^2 + (sigma mu - lambda - q) t - q mu = 0
  const double A = sigma, B = sigma * mu - lambda - q, C = -q * mu;
  const double disc = B * B - 4.0 * A * C;
  if (!(disc > 1e-12)) throw Error(ErrorCode::RootFindingFailed, "repeated or complex roots");
  const double sq = std::sqrt(disc);
  // Stable pairing: compute the larger-magnitude root first.
  const double r1 = (B >= 0.0) ? (-B - sq) / (2.0 * A) : (-B + sq) / (2.0 * A);
  const double r2 = C / (A * r1);
  return {std::max(r1, r2), std::min(r1, r2)};
}

std::vector<double> bracketed_roots(const ScaleSet& probe, const std::vector<double>& poles) {
  // probe only supplies phi; one root in (0, inf), one in (-mu_min, 0) and
  // one between each pair of consecutive poles.
  const double q = probe.q();
  auto g = [&](double t) { return probe.phi(t) - q; };
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
  auto solve = [&](double lo, double hi) {
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    if (iters >= 200) throw Error(ErrorCode::RootFindingFailed, "bracketed solve did not converge");
    return 0.5 * (r.first + r.second);
  };
  std::vector<double> roots;
  double hi = 1.0;
  while (g(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw Error(ErrorCode::RootFindingFailed, "no positive root");
  }
  roots.push_back(solve(0.0, hi));
  // Poles sorted from closest to zero outward: -mu_1 > -mu_2 > ...
  double right = 0.0;
  for (double pole : poles) {
    const double left = -pole;
    const double gap = right - left;
    // phi blows up to +inf just right of a pole and to -inf just left of one.
    const double a = left + gap * 1e-10;
    const double b = right == 0.0 ? 0.0 : right - gap * 1e-10;
    if (!(g(a) > 0.0 && g(b) < 0.0)) throw Error(ErrorCode::RootFindingFailed, "lost sign change");
    roots.push_back(solve(a, b));
    right = left;
  }
  return roots;
}

}  // namespace

ScaleSet build_scale(const ValidatedModel& model, Phase phase) {
  const ModelConfig& m = model.config();
  if (phase == Phase::Off) throw Error(ErrorCode::InvalidParameter, "no scale function for phase 0");
  if (m.l != 0.0) throw Error(ErrorCode::BacklogUnsupported, "scale functions need l = 0");
  const double sigma = m.sigma(phase);

  // Merge atoms sharing a rate so the poles are distinct.
  std::vector<DemandAtom> atoms;
  for (const auto& a : m.demand.atoms()) {
    auto it = std::find_if(atoms.begin(), atoms.end(),
                           [&](const DemandAtom& o) { return std::abs(o.rate - a.rate) <= 1e-14 * a.rate; });
    if (it == atoms.end()) atoms.push_back(a);
    else it->weight += a.weight;
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const DemandAtom& x, const DemandAtom& y) { return x.rate < y.rate; });
  const DemandLaw law = atoms.size() == 1 ? DemandLaw::exponential(atoms[0].rate)
                                          : DemandLaw::hyper_exponential(atoms);

  std::vector<double> roots;
  if (atoms.size() == 1) {
    roots = exponential_roots(sigma, m.lambda, atoms[0].rate, m.q);
  } else {
    const ScaleSet probe(phase, m.q, sigma, m.lambda, law, {});
    std::vector<double> poles;
    for (const auto& a : atoms) poles.push_back(a.rate);
    roots = bracketed_roots(probe, poles);
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < 1e-12) {
        throw Error(ErrorCode::RootFindingFailed, "repeated exponent");
      }
    }
  }

  const ScaleSet probe(phase, m.q, sigma, m.lambda, law, {});
  std::vector<ScaleTerm> terms;
  for (double r : roots) {
    const double d = probe.phi_derivative(r);
    if (!(std::abs(d) > 1e-300) || !std::isfinite(d)) {
      throw Error(ErrorCode::RootFindingFailed, "vanishing derivative at a root");
    }
    terms.push_back({1.0 / d, r});
  }
  return ScaleSet(phase, m.q, sigma, m.lambda, law, std::move(terms));
}

double check_laplace_identity(const ScaleSet& s, double theta) {
  const double big = s.largest_root();
  if (!(theta > big)) throw Error(ErrorCode::ThetaInsideSpectrum, "theta must exceed Phi(q)");
  // Tail beyond T is sum |w| e^{(t-theta)T}/(theta-t); pick T to push it below 1e-12.
  double T = 0.0;
  for (const auto& t : s.terms()) {
    const double gap = theta - t.exponent;
    const double need = std::log(std::abs(t.weight) / gap / 1e-12 * s.terms().size()) / gap;
    T = std::max(T, need);
  }
  constexpr double kMaxHorizon = 1e7;
  if (!(T <= kMaxHorizon)) {
    throw Error(ErrorCode::ThetaInsideSpectrum, "truncation horizon too large; theta too close to Phi(q)");
  }
  double integral = 0.0;
  for (const auto& t : s.terms()) {
    const double gap = theta - t.exponent;
    integral += t.weight * (-std::expm1(-gap * T)) / gap;
  }
  return std::abs(integral - 1.0 / (s.phi(theta) - s.q()));
}

}  // namespace bandctl
