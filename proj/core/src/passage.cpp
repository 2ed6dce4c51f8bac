// SPDX-License-Identifier: MIT
#include "bandctl/passage.hpp"

#include <string>

#include "bandctl/errors.hpp"

namespace bandctl {
namespace {

constexpr double kEdge = 1e-12;

void require_in(double x, double lo, double hi, const char* what) {
  const double slack = kEdge * std::max(1.0, std::abs(hi));
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw Error(ErrorCode::OutOfBand, std::string(what) + ": x=" + std::to_string(x) +
                                          " outside [" + std::to_string(lo) + ", " +
                                          std::to_string(hi) + "]");
  }
}

}  // namespace

ExitContext::ExitContext(const ScaleSet& scale, double lower, double upper)
    : scale_(&scale), a_(lower), d_(upper) {
  if (!(lower < upper) || lower < 0.0) {
    throw Error(ErrorCode::InvalidBand, "exit band needs 0 <= lower < upper");
  }
  w_span_ = scale.W(upper - lower);
}

double up_crossing_factor(const ExitContext& ctx, double x) {
  require_in(x, ctx.lower(), ctx.upper(), "up_crossing_factor");
  return ctx.scale().W(x - ctx.lower()) / ctx.span_w();
}

double exit_down(const ExitContext& ctx, double x, double theta) {
  require_in(x, ctx.lower(), ctx.upper(), "exit_down");
  const auto& s = ctx.scale();
  const double u = x - ctx.lower(), span = ctx.upper() - ctx.lower();
  return s.Ztheta(u, theta) - s.W(u) / ctx.span_w() * s.Ztheta(span, theta);
}

double potential_density(const ExitContext& ctx, double x, double y) {
  require_in(x, ctx.lower(), ctx.upper(), "potential_density");
  require_in(y, ctx.lower(), ctx.upper(), "potential_density");
  const auto& s = ctx.scale();
  return s.W(x - ctx.lower()) * s.W(ctx.upper() - y) / ctx.span_w() - s.W(x - y);
}

double reflected_up_factor(const ScaleSet& scale, double x, double y1) {
  require_in(x, 0.0, y1, "reflected_up_factor");
  return scale.Z(x) / scale.Z(y1);
}

double reflected_local_time(const ScaleSet& scale, double x, double y1) {
  require_in(x, 0.0, y1, "reflected_local_time");
  const double shift = scale.phi_prime0() / scale.q();
  return scale.Z(x) / scale.Z(y1) * (scale.Zbar(y1) + shift) - (scale.Zbar(x) + shift);
}

TransferOperator::TransferOperator(const ExitContext& low_band, const ScaleSet& high,
                                   TransferPayoff payoff, const QuadratureOptions& quad)
    : ctx_(&low_band), high_(&high), kind_(payoff), quad_(quad) {
  const double a = ctx_->lower(), d = ctx_->upper();
  const auto& low = ctx_->scale();
  g_upper_ = this->payoff(d);
  full_integral_ = integrate([&](double z) { return generator_gap(z) * low.W(d - z); }, a, d, quad_);
}

double TransferOperator::payoff(double x) const noexcept {
  return kind_ == TransferPayoff::Z1 ? high_->Z(x) : high_->Wbarbar(x);
}

double TransferOperator::generator_gap(double z) const noexcept {
  const double dsigma = ctx_->scale().sigma() - high_->sigma();
  if (kind_ == TransferPayoff::Z1) return dsigma * high_->q() * high_->W(z);
  return z + dsigma * high_->Wbar(z);
}

double TransferOperator::operator()(double x) const {
  const double a = ctx_->lower(), d = ctx_->upper();
  require_in(x, a, d, "omega2");
  const auto& low = ctx_->scale();
  const double r = low.W(x - a) / ctx_->span_w();
  // The kernel r W2(d - z) - W2(x - z) jumps at z = x, so the x-dependent part stops there.
  const double partial =
      integrate([&](double z) { return generator_gap(z) * low.W(x - z); }, a, x, quad_);
  return payoff(x) - r * g_upper_ + r * full_integral_ - partial;
}

double omega2(const ExitContext& low_band, const ScaleSet& high, TransferPayoff payoff, double x) {
  return TransferOperator(low_band, high, payoff)(x);
}

}  // namespace bandctl
