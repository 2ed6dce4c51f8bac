// SPDX-License-Identifier: MIT
#include "bandctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bandctl/errors.hpp"

namespace bandctl {

DemandLaw DemandLaw::exponential(double rate) {
  DemandLaw law;
  law.kind_ = Kind::Exponential;
  law.atoms_ = {{1.0, rate}};
  return law;
}

DemandLaw DemandLaw::hyper_exponential(std::vector<DemandAtom> atoms) {
  DemandLaw law;
  law.kind_ = Kind::HyperExponential;
  law.atoms_ = std::move(atoms);
  return law;
}

double DemandLaw::mean() const noexcept {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.weight / a.rate;
  return m;
}

double DemandLaw::density(double y) const noexcept {
  if (y < 0.0) return 0.0;
  double f = 0.0;
  for (const auto& a : atoms_) f += a.weight * a.rate * std::exp(-a.rate * y);
  return f;
}

double DemandLaw::cdf(double y) const noexcept { return 1.0 - tail(y); }

double DemandLaw::tail(double y) const noexcept {
  if (y <= 0.0) return 1.0;
  double t = 0.0;
  for (const auto& a : atoms_) t += a.weight * std::exp(-a.rate * y);
  return t;
}

double DemandLaw::laplace(double theta) const noexcept {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight * a.rate / (a.rate + theta);
  return s;
}

double DemandLaw::laplace_derivative(double theta) const noexcept {
  double s = 0.0;
  for (const auto& a : atoms_) s -= a.weight * a.rate / ((a.rate + theta) * (a.rate + theta));
  return s;
}

double DemandLaw::min_rate() const noexcept {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) r = std::min(r, a.rate);
  return r;
}

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

ValidatedModel validate(const ModelConfig& raw, Scope scope) {
  const auto& m = raw;
  require(finite_all({m.sigma1, m.sigma2, m.lambda, m.q, m.b, m.l, m.h0_b, m.h1.a, m.h1.c,
                      m.h2.a, m.h2.c, m.penalty.p0, m.penalty.p1}),
          ErrorCode::InvalidParameter, "all parameters must be finite");
  require(m.sigma2 > 0.0 && m.sigma2 < m.sigma1, ErrorCode::NonOrderedRates,
          "need 0 < sigma2 < sigma1, got sigma1=" + std::to_string(m.sigma1) +
              " sigma2=" + std::to_string(m.sigma2));
  require(m.lambda > 0.0, ErrorCode::InvalidParameter, "lambda must be positive");
  require(m.q > 0.0, ErrorCode::InvalidParameter, "q must be positive");
  require(m.b > 0.0, ErrorCode::InvalidParameter, "b must be positive");
  require(m.l <= 0.0, ErrorCode::InvalidParameter, "backlog floor l must be <= 0");
  require(m.h1.a >= 0.0 && m.h1.c >= 0.0 && m.h2.a >= 0.0 && m.h2.c >= 0.0 && m.h0_b >= 0.0,
          ErrorCode::NegativeCost, "holding cost coefficients must be >= 0");
  require(m.penalty.p0 >= 0.0 && m.penalty.p1 >= 0.0, ErrorCode::NegativeCost,
          "penalty coefficients must be >= 0");

  const auto& atoms = m.demand.atoms();
  require(!atoms.empty(), ErrorCode::InvalidParameter, "demand law has no atoms");
  double wsum = 0.0;
  for (const auto& a : atoms) {
    require(std::isfinite(a.rate) && a.rate > 0.0, ErrorCode::InvalidParameter,
            "demand rates must be positive");
    require(std::isfinite(a.weight) && a.weight > 0.0, ErrorCode::InvalidParameter,
            "demand weights must be positive");
    wsum += a.weight;
  }
  require(std::abs(wsum - 1.0) <= 1e-12, ErrorCode::InvalidParameter,
          "demand weights must sum to 1");

  const auto& K = m.switching;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      require(std::isfinite(K.k[i][j]) && K.k[i][j] >= 0.0, ErrorCode::NegativeCost,
              "switching costs must be finite and >= 0");
    }
  }
  const double k01 = K(Phase::Off, Phase::High), k02 = K(Phase::Off, Phase::Low);
  const double k12 = K(Phase::High, Phase::Low), k21 = K(Phase::Low, Phase::High);
  require(k01 <= k02 + k21, ErrorCode::SwitchInequalityViolated, "need K01 <= K02 + K21");
  require(k02 <= k01 + k12, ErrorCode::SwitchInequalityViolated, "need K02 <= K01 + K12");
  require(k12 + k21 > 0.0, ErrorCode::SwitchInequalityViolated, "need K12 + K21 > 0");

  if (scope == Scope::Analytic) {
    require(m.l == 0.0, ErrorCode::BacklogUnsupported,
            "the analytic engine needs l = 0 (the simulator accepts l < 0)");
  }
  return ValidatedModel(raw, scope);
}

double laplace_exponent(const ModelConfig& m, Phase phase, double theta) {
  return m.sigma(phase) * theta - m.lambda + m.lambda * m.demand.laplace(theta);
}

double laplace_exponent_derivative(const ModelConfig& m, Phase phase, double theta) {
  return m.sigma(phase) + m.lambda * m.demand.laplace_derivative(theta);
}

double drift_mean(const ModelConfig& m, Phase phase) {
  return m.sigma(phase) - m.lambda * m.demand.mean();
}

double penalty_tail(const ModelConfig& m, double z) {
  if (z < 0.0) return m.penalty.p0 + m.penalty.p1 * (m.demand.mean() - z);
  // For an Exp(mu) atom the overshoot is again Exp(mu) by memorylessness.
  double s = 0.0;
  for (const auto& a : m.demand.atoms()) {
    s += a.weight * std::exp(-a.rate * z) * (m.penalty.p0 + m.penalty.p1 / a.rate);
  }
  return s;
}

}  // namespace bandctl
