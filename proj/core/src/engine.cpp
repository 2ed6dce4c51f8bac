// SPDX-License-Identifier: MIT
#include "engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bandctl/errors.hpp"

namespace bandctl {

double magnitude(const CostParts& p) noexcept {
  return std::max({std::abs(p.holding), std::abs(p.shortage), std::abs(p.switching)});
}

namespace detail {

double magnitude(const AffineParts& p) noexcept {
  return std::max({std::abs(p.holding.c), std::abs(p.holding.m), std::abs(p.shortage.c),
                   std::abs(p.shortage.m), std::abs(p.switching.c), std::abs(p.switching.m)});
}

namespace {

constexpr double kEdge = 1e-10;

double clamp_to_band(double x, double lo, double hi) {
  const double slack = kEdge * std::max(1.0, std::abs(hi));
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw Error(ErrorCode::OutOfBand,
                "x=" + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
  return std::clamp(x, lo, hi);
}

// int_0^L e^{d s} ds
double e0(double d, double L) noexcept { return expm1_ratio(d, L); }

// int_0^L s e^{d s} ds
double e1(double d, double L) noexcept {
  const double dl = d * L;
  if (std::abs(dl) < 1e-2) {
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < 10; ++n) {
      sum += term / (n + 2);
      term *= dl / (n + 1);
    }
    return L * L * sum;
  }
  return (L * std::exp(dl) - expm1_ratio(d, L)) / d;
}

// int_0^L e^{a s + c (L - s)} ds, factoring out the larger exponent.
double conv(double a, double c, double L) noexcept {
  return a >= c ? std::exp(a * L) * e0(c - a, L) : std::exp(c * L) * e0(a - c, L);
}

double contraction_denominator(double g, const char* what) {
  if (!(g < 1.0)) {
    throw Error(ErrorCode::FixedPointNotContractive,
                std::string(what) + " return factor " + std::to_string(g) + " >= 1");
  }
  return 1.0 - g;
}

}  // namespace

TypeOneEngine::TypeOneEngine(const ValidatedModel& model, const BandOne& band,
                             const EngineOptions& opt)
    : m_(model.config()),
      band_(band),
      strategy_(BandStrategy::from(band)),
      opt_(opt),
      s1_(build_scale(model, Phase::High)),
      s2_(build_scale(model, Phase::Low)) {
  check_band(band_, m_.b);
  const double b = m_.b, y1 = band_.y1, y2 = band_.y2;
  span_ = b - y2;
  w2_span_ = s2_.W(span_);
  z2_span_ = s2_.Z(span_);
  zbar2_span_ = s2_.Zbar(span_);
  wbar2_span_ = s2_.Wbar(span_);
  z1_y1_ = s1_.Z(y1);
  w1_y1_ = s1_.W(y1);
  wbb1_y1_ = s1_.Wbarbar(y1);
  w1_0_ = s1_.W(0.0);

  const auto& atoms = m_.demand.atoms();
  penalty_coef_.resize(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    penalty_coef_[k] = atoms[k].weight * (m_.penalty.p0 + m_.penalty.p1 / atoms[k].rate);
  }
  reflected_top_ = reflected_convolution(y1);
  shortage_floor_ = reflected_shortage_direct(0.0);
  renewal_den_ = w1_0_ * z1_y1_ / w1_y1_;

  landing_coef_.assign(atoms.size(), 0.0);
  restart_coef_.assign(atoms.size(), 0.0);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double mu = atoms[k].rate, w = atoms[k].weight;
    const double landing = integrate(
        [&](double v) { return shortage_high_local(v) * std::exp(-mu * (y2 - v)); }, 0.0, y2,
        opt_.quad);
    const double restart =
        integrate([&](double v) { return s1_.Z(v) * std::exp(-mu * (y2 - v)); }, 0.0, y2, opt_.quad);
    // Coefficients of e^{-mu (z - y2)} in the landing payoffs seen from z >= y2.
    const double decay = std::exp(-mu * y2);
    landing_coef_[k] = penalty_coef_[k] * decay +
                       w * decay * shortage_floor_ / renewal_den_ + w * mu * landing;
    restart_coef_[k] = w * decay + w * mu * restart;
  }
  full_ = kernel_integrals(b).v;

  at_y1_ = low_pieces(y1);
  const double rho = at_y1_.omega_z / z1_y1_;
  holding_y1_ = holding_low_local(y1) + (m_.h1.a / m_.q) * (at_y1_.exit_down - rho) +
                m_.h1.c * (rho * wbb1_y1_ - at_y1_.omega_w);
  switching_y1_ = at_y1_.r * m_.switching(Phase::Low, Phase::Off) +
                  rho * m_.switching(Phase::High, Phase::Low) +
                  m_.switching(Phase::Low, Phase::High) * at_y1_.exit_down;
  solve_level_b();
}

Lanes<4> TypeOneEngine::kernel_integrals(double x) const noexcept {
  // Closed forms of int_{y2}^{x} W2(x - z) g(z) dz for the four payoffs g,
  // all of them exponential polynomials in z.
  const double y2 = band_.y2, L = x - band_.y2;
  const double dsigma = s2_.sigma() - s1_.sigma();
  const auto& atoms = m_.demand.atoms();
  Lanes<4> out;
  if (!(L > 0.0)) return out;
  for (const auto& t2 : s2_.terms()) {
    const double w2 = t2.weight, th2 = t2.exponent;
    const double flat = e0(th2, L);  // int_0^L e^{th2 (L - s)} ds
    double gz = 0.0, gw = 0.0;
    for (const auto& t1 : s1_.terms()) {
      const double lifted = std::exp(t1.exponent * y2) * conv(t1.exponent, th2, L);
      gz += t1.weight * lifted;
      gw += t1.weight / t1.exponent * (lifted - flat);
    }
    const double linear = std::exp(th2 * L) * (y2 * e0(-th2, L) + e1(-th2, L));
    double sl = 0.0, rl = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const double c = conv(-atoms[k].rate, th2, L);
      sl += landing_coef_[k] * c;
      rl += restart_coef_[k] * c;
    }
    out.v[0] += w2 * dsigma * m_.q * gz;
    out.v[1] += w2 * (linear + dsigma * gw);
    out.v[2] += w2 * sl;
    out.v[3] += w2 * rl;
  }
  return out;
}

double TypeOneEngine::reflected_convolution(double x) const noexcept {
  // int_0^x W1(x - z) T(z) dz with T the penalty tail.
  if (!(x > 0.0)) return 0.0;
  const auto& atoms = m_.demand.atoms();
  double s = 0.0;
  for (const auto& t : s1_.terms()) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      s += t.weight * penalty_coef_[k] * conv(-atoms[k].rate, t.exponent, x);
    }
  }
  return s;
}

TypeOneEngine::LowPieces TypeOneEngine::low_pieces(double x) const {
  const double y2 = band_.y2, b = m_.b;
  const double r = s2_.W(x - y2) / w2_span_;
  const auto partial = kernel_integrals(x);
  LowPieces p;
  p.r = r;
  p.exit_down = s2_.Z(x - y2) - r * z2_span_;
  p.omega_z = s1_.Z(x) - r * s1_.Z(b) + r * full_[0] - partial.v[0];
  p.omega_w = s1_.Wbarbar(x) - r * s1_.Wbarbar(b) + r * full_[1] - partial.v[1];
  p.shortage_mu = m_.lambda * (r * full_[2] - partial.v[2]);
  p.shortage_gamma = m_.lambda / z1_y1_ * (r * full_[3] - partial.v[3]);
  return p;
}

double TypeOneEngine::holding_high_local(double x) const {
  x = std::max(x, 0.0);
  const double zeta = s1_.Z(x) / z1_y1_;
  return (m_.h1.a / m_.q) * (1.0 - zeta) + m_.h1.c * (zeta * wbb1_y1_ - s1_.Wbarbar(x));
}

double TypeOneEngine::holding_low_local(double x) const {
  const double y2 = band_.y2, b = m_.b, q = m_.q;
  const double u = x - y2, R = s2_.W(u) / w2_span_, d0 = s2_.phi_prime0();
  const double h21 = (1.0 - s2_.Z(u) + R * z2_span_ - R) / q;
  const double h22 = b * R + y2 * (s2_.Z(u) - R * z2_span_) + s2_.Zbar(u) - d0 * s2_.Wbar(u) -
                     R * (zbar2_span_ - d0 * wbar2_span_);
  return (m_.h2.a + m_.h2.c * d0 / q) * h21 + (m_.h2.c / q) * (x - h22);
}

double TypeOneEngine::reflected_shortage_direct(double x) const {
  x = std::max(x, 0.0);
  return m_.lambda * (s1_.W(x) / w1_y1_ * reflected_top_ - reflected_convolution(x));
}

double TypeOneEngine::shortage_high_local(double x) const {
  x = std::max(x, 0.0);
  const double renewal = s1_.Z(x) - s1_.W(x) * z1_y1_ / w1_y1_;
  return reflected_shortage_direct(x) + renewal / renewal_den_ * shortage_floor_;
}

AffineParts TypeOneEngine::native_low(double x) const {
  const LowPieces p = low_pieces(x);
  const double rho = p.omega_z / z1_y1_;
  const double ry1 = at_y1_.r;
  const double den = contraction_denominator(at_y1_.omega_z / z1_y1_, "phase-2 return");
  const double den_s = contraction_denominator(at_y1_.shortage_gamma, "shortage return");

  const double a_x = holding_low_local(x) + (m_.h1.a / m_.q) * (p.exit_down - rho) +
                     m_.h1.c * (rho * wbb1_y1_ - p.omega_w);
  const double k_x = p.r * m_.switching(Phase::Low, Phase::Off) +
                     rho * m_.switching(Phase::High, Phase::Low) +
                     m_.switching(Phase::Low, Phase::High) * p.exit_down;
  AffineParts out;
  out.holding = {a_x + rho * holding_y1_ / den, p.r + rho * ry1 / den};
  out.shortage = {p.shortage_mu + p.shortage_gamma * at_y1_.shortage_mu / den_s,
                  p.r + p.shortage_gamma * ry1 / den_s};
  out.switching = {k_x + rho * switching_y1_ / den, p.r + rho * ry1 / den};
  return out;
}

AffineParts TypeOneEngine::native_high(double x) const {
  x = std::max(x, 0.0);
  const double zeta = s1_.Z(x) / z1_y1_;
  const double ry1 = at_y1_.r;
  const double den = contraction_denominator(at_y1_.omega_z / z1_y1_, "phase-2 return");
  const double den_s = contraction_denominator(at_y1_.shortage_gamma, "shortage return");
  AffineParts out;
  out.holding = {holding_high_local(x) + zeta * holding_y1_ / den, zeta * ry1 / den};
  out.shortage = {shortage_high_local(x) + zeta * at_y1_.shortage_mu / den_s, zeta * ry1 / den_s};
  out.switching = {zeta * (m_.switching(Phase::High, Phase::Low) + switching_y1_ / den),
                   zeta * ry1 / den};
  return out;
}

void TypeOneEngine::solve_level_b() {
  const double b = m_.b, y3 = band_.y3, lam = m_.lambda, q = m_.q;
  const auto& F = m_.demand;
  const double k01 = m_.switching(Phase::Off, Phase::High);
  const double k02 = m_.switching(Phase::Off, Phase::Low);

  // After a shutdown the next demand restarts phase 2 above y3 and phase 1 below.
  AffineParts acc = integrate([&](double z) { return native_low(b - z) * F.density(z); }, 0.0,
                              b - y3, opt_.quad);
  acc = acc + integrate([&](double z) { return native_high(b - z) * F.density(z); }, b - y3, b,
                        opt_.quad);
  acc = acc + native_high(0.0) * F.tail(b);
  acc.switching.c += k02 * F.cdf(b - y3) + k01 * (1.0 - F.cdf(b - y3));
  acc.shortage.c += penalty_tail(m_, b);

  const double w = lam / (lam + q);
  acc = acc * w;
  acc.holding.c += m_.h0_b / (q + lam);

  auto solve = [](Affine a, const char* what) {
    if (!(std::abs(a.m) < 1.0)) {
      throw Error(ErrorCode::FixedPointNotContractive,
                  std::string(what) + " level-b slope " + std::to_string(a.m));
    }
    return a.c / (1.0 - a.m);
  };
  level_ = {solve(acc.holding, "holding"), solve(acc.shortage, "shortage"),
            solve(acc.switching, "switching")};
}

CostParts TypeOneEngine::resolve(const AffineParts& p) const noexcept {
  return {p.holding.at(level_.holding), p.shortage.at(level_.shortage),
          p.switching.at(level_.switching)};
}

CostParts TypeOneEngine::at(Phase phase, double x, Side side) const {
  x = clamp_to_band(x, 0.0, m_.b);
  const double y1 = band_.y1, y2 = band_.y2;
  if (phase == Phase::Off) return level_;
  if (phase == Phase::High) {
    const bool own = side == Side::Left ? x <= y1 : x < y1;
    if (own) return resolve(native_high(x));
    CostParts v = resolve(native_low(x));
    v.switching += m_.switching(Phase::High, Phase::Low);
    return v;
  }
  const bool switching = side == Side::Right ? x < y2 : x <= y2;
  if (!switching) return resolve(native_low(x));
  CostParts v = resolve(native_high(x));
  v.switching += m_.switching(Phase::Low, Phase::High);
  return v;
}

// ---------------------------------------------------------------------------

TypeTwoEngine::TypeTwoEngine(std::shared_ptr<const TypeOneEngine> base, double y4)
    : base_(std::move(base)), y4_(y4) {
  const auto& band = base_->band();
  const BandTwo two{band.y2, band.y3, band.y1, y4};
  const ModelConfig& m = base_->config();
  check_band(two, m.b);
  strategy_ = BandStrategy::from(two);
  w1_span_ = base_->high().W(m.b - y4);

  // Landing below y4 from the upper component resumes the type-one policy.
  const auto& atoms = m.demand.atoms();
  const auto& quad = base_->options().quad;
  moment_.assign(atoms.size(), CostParts{});
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double mu = atoms[k].rate;
    auto f = [&](double w) { return base_->at(Phase::High, w, Side::Natural) * std::exp(-mu * (y4 - w)); };
    moment_[k] = integrate(f, 0.0, band.y1, quad) + integrate(f, band.y1, y4, quad);
  }
  floor_value_ = base_->at(Phase::High, 0.0, Side::Natural);
}

CostParts TypeTwoEngine::landing(double y) const {
  const ModelConfig& m = base_->config();
  const auto& atoms = m.demand.atoms();
  CostParts s = floor_value_ * m.demand.tail(y);
  s.shortage += penalty_tail(m, y);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    s = s + moment_[k] * (atoms[k].weight * atoms[k].rate * std::exp(-atoms[k].rate * (y - y4_)));
  }
  return s;
}

double TypeTwoEngine::holding_upper_local(double x) const {
  const ModelConfig& m = base_->config();
  const ScaleSet& s1 = base_->high();
  const double b = m.b, q = m.q, d0 = s1.phi_prime0();
  const double u = x - y4_, D = b - y4_, R = s1.W(u) / w1_span_;
  const double h11 = (1.0 - s1.Z(u) + R * s1.Z(D) - R) / q;
  const double h12 = b * R + y4_ * (s1.Z(u) - R * s1.Z(D)) + s1.Zbar(u) - d0 * s1.Wbar(u) -
                     R * (s1.Zbar(D) - d0 * s1.Wbar(D));
  return (m.h1.a + m.h1.c * d0 / q) * h11 + (m.h1.c / q) * (x - h12);
}

CostParts TypeTwoEngine::upper(double x) const {
  const ModelConfig& m = base_->config();
  const ScaleSet& s1 = base_->high();
  const double b = m.b;
  x = clamp_to_band(x, y4_, b);
  const double wx = s1.W(x - y4_);
  const double up = wx / w1_span_;
  auto kernel = [&](double y) {
    return landing(y) * (wx * s1.W(b - y) / w1_span_ - s1.W(x - y));
  };
  const auto& quad = base_->options().quad;
  const CostParts jumps = integrate(kernel, y4_, x, quad) + integrate(kernel, x, b, quad);
  CostParts at_b = base_->level_b();
  at_b.switching += m.switching(Phase::High, Phase::Off);
  CostParts v = at_b * up + jumps * m.lambda;
  v.holding += holding_upper_local(x);
  return v;
}

CostParts TypeTwoEngine::at(Phase phase, double x, Side side) const {
  if (phase != Phase::High) return base_->at(phase, x, side);
  const ModelConfig& m = base_->config();
  x = clamp_to_band(x, 0.0, m.b);
  const double y1 = base_->band().y1;
  const bool above = side == Side::Right ? x >= y4_ : x > y4_;
  if (above) return upper(x);
  const bool own = side == Side::Left ? x <= y1 : x < y1;
  if (own) return base_->at(Phase::High, x, Side::Left);
  CostParts v = base_->at(Phase::Low, x, Side::Right);
  v.switching += m.switching(Phase::High, Phase::Low);
  return v;
}

}  // namespace detail
}  // namespace bandctl
