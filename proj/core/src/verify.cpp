// SPDX-License-Identifier: MIT
#include "bandctl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bandctl/errors.hpp"
#include "parallel.hpp"

namespace bandctl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Integral of w(x - a) f(a) over [0, x], split where x - a crosses a break.
double convolve_demand(const ModelConfig& m, const std::function<double(double)>& w, double x,
                       std::span<const double> breaks, const QuadratureOptions& quad) {
  std::vector<double> cuts{0.0, x};
  for (double t : breaks) {
    if (t > 0.0 && t < x) cuts.push_back(x - t);
  }
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    s += integrate([&](double a) { return w(x - a) * m.demand.density(a); }, cuts[i], cuts[i + 1],
                   quad);
  }
  return s;
}

std::string describe(const char* what, double x, double v) {
  std::ostringstream os;
  os.precision(6);
  os << what << " at x=" << x << ": " << v;
  return os.str();
}

// One-sided slopes taken inside the pieces adjacent to x, so a threshold at
// or next to x never enters a difference quotient.
double sided_supersolution_slope(const CostSurface& surface, Phase phase, double x, double h,
                                 double kink_ratio) {
  auto w = [&](double y, Side side) { return surface.total(phase, y, side); };
  const double right =
      (-3.0 * w(x, Side::Right) + 4.0 * w(x + h, Side::Right) - w(x + 2.0 * h, Side::Right)) /
      (2.0 * h);
  if (x - 2.0 * h < 0.0) return right;
  const double left =
      (3.0 * w(x, Side::Left) - 4.0 * w(x - h, Side::Left) + w(x - 2.0 * h, Side::Left)) / (2.0 * h);
  if (std::abs(right - left) <= kink_ratio * (1.0 + 0.5 * std::abs(left + right))) {
    return 0.5 * (left + right);
  }
  return left > right ? right : kNaN;
}

/// Sign changes of a piecewise-smooth d on (0, b), searched inside each
/// piece between consecutive breaks.
std::vector<double> crossings(const std::function<double(double)>& d,
                              const std::vector<double>& breaks, double b) {
  std::vector<double> ends{0.0};
  for (double t : breaks) {
    if (t > 0.0 && t < b) ends.push_back(t);
  }
  ends.push_back(b);
  std::vector<double> out;
  constexpr int kSamples = 32;
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    const double lo = ends[i];
    const double hi = ends[i + 1];
    const double pad = 1e-9 * (hi - lo);
    double xa = lo + pad;
    double da = d(xa);
    for (int k = 1; k <= kSamples; ++k) {
      const double xb = k == kSamples ? hi - pad : lo + (hi - lo) * k / kSamples;
      const double db = d(xb);
      if ((da < 0.0) != (db < 0.0)) {
        double a = xa;
        double c = xb;
        for (int it = 0; it < 80 && c - a > 1e-13 * b; ++it) {
          const double mid = 0.5 * (a + c);
          if ((d(mid) < 0.0) == (da < 0.0)) {
            a = mid;
          } else {
            c = mid;
          }
        }
        out.push_back(0.5 * (a + c));
      }
      xa = xb;
      da = db;
    }
  }
  return out;
}

}  // namespace

SlopeProbe probe_slope(const std::function<double(double)>& w, double x, const OperatorOptions& opt) {
  const double h = opt.fd_step;
  SlopeProbe p;
  const double w0 = w(x);
  if (x - h < 0.0) {
    // Second-order forward difference at the floor.
    p.right = (-3.0 * w0 + 4.0 * w(x + h) - w(x + 2.0 * h)) / (2.0 * h);
    p.left = p.central = p.supersolution_slope = p.right;
    return p;
  }
  const double wl = w(x - h), wr = w(x + h);
  p.left = (w0 - wl) / h;
  p.right = (wr - w0) / h;
  p.central = (wr - wl) / (2.0 * h);
  p.kink = std::abs(p.right - p.left) > opt.kink_ratio * (1.0 + std::abs(p.central));
  if (!p.kink) {
    p.supersolution_slope = p.central;
  } else if (p.left > p.right) {
    // Concave corner: touching functions have slopes in [right, left]; the
    // operator is increasing in the slope, so the right one binds.
    p.supersolution_slope = p.right;
  } else {
    p.supersolution_slope = kNaN;
  }
  return p;
}

double operator_L(const ValidatedModel& model, Phase phase, const std::function<double(double)>& w,
                  double slope, double x, std::span<const double> breaks,
                  const OperatorOptions& opt) {
  const ModelConfig& m = model.config();
  if (phase == Phase::Off) throw Error(ErrorCode::InvalidParameter, "use operator_L0 for phase 0");
  const double lam = m.lambda;
  return m.sigma(phase) * slope - (lam + m.q) * w(x) +
         lam * convolve_demand(m, w, x, breaks, opt.quad) + lam * penalty_tail(m, x) +
         lam * w(0.0) * m.demand.tail(x) + m.holding(phase)(x);
}

double operator_L(const ValidatedModel& model, Phase phase, const std::function<double(double)>& w,
                  double x, std::span<const double> breaks, const OperatorOptions& opt) {
  const SlopeProbe p = probe_slope(w, x, opt);
  if (std::isnan(p.supersolution_slope)) return kNaN;
  return operator_L(model, phase, w, p.supersolution_slope, x, breaks, opt);
}

double operator_L0(const ValidatedModel& model, const CostSurface& surface, Selection selection,
                   const OperatorOptions& opt) {
  const ModelConfig& m = model.config();
  const double k01 = m.switching(Phase::Off, Phase::High);
  const double k02 = m.switching(Phase::Off, Phase::Low);
  const BandStrategy& st = surface.strategy();
  auto restart = [&](double x) {
    const double high = k01 + surface.total(Phase::High, x);
    const double low = k02 + surface.total(Phase::Low, x);
    if (selection == Selection::Optimal) return std::min(high, low);
    return st.restarts_high(x) ? high : low;
  };
  auto th = st.thresholds();
  if (selection == Selection::Optimal) {
    // The minimum has a kink wherever the two restart values cross.
    const auto cross = crossings(
        [&](double x) { return k01 + surface.total(Phase::High, x) - k02 - surface.total(Phase::Low, x); },
        th, m.b);
    th.insert(th.end(), cross.begin(), cross.end());
  }
  const double b = m.b, lam = m.lambda;
  const double v0 = surface.objective();
  return -(m.q + lam) * v0 +
         lam * (convolve_demand(m, restart, b, th, opt.quad) + penalty_tail(m, b)) +
         lam * restart(0.0) * m.demand.tail(b) + m.h0_b;
}

VerificationReport verify_strategy(const ValidatedModel& model, const CostSurface& surface,
                                   const VerifyOptions& opt) {
  const ModelConfig& m = model.config();
  const double b = m.b;
  const auto th = surface.strategy().thresholds();

  // Uniform grid on the open interval (0, b), refined around each threshold,
  // plus points straddling it.
  std::vector<double> grid;
  const int n = std::max(opt.grid, 2);
  const double h = b / n;
  for (int k = 0; k < n; ++k) grid.push_back((k + 0.5) * h);
  const int refine = std::max(opt.refine, 1);
  for (double t : th) {
    for (int j = -2 * refine; j <= 2 * refine; ++j) grid.push_back(t + j * h / refine);
    grid.push_back(t - 0.5 * opt.kink_exclusion);
    grid.push_back(t + 0.5 * opt.kink_exclusion);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(), [&](double x) { return x <= 0.0 || x >= b; }),
             grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double c) { return std::abs(a - c) < 1e-12; }),
             grid.end());

  const std::size_t N = grid.size();
  VerificationReport rep;
  rep.grid = grid;
  rep.residual_L1.resize(N);
  rep.residual_L2.resize(N);
  rep.switch_slack_12.resize(N);
  rep.switch_slack_21.resize(N);
  rep.near_threshold.resize(N);
  std::vector<double> vmax(N);

  const double k12 = m.switching(Phase::High, Phase::Low);
  const double k21 = m.switching(Phase::Low, Phase::High);
  const std::function<double(double)> v1 = [&](double x) { return surface.total(Phase::High, x); };
  const std::function<double(double)> v2 = [&](double x) { return surface.total(Phase::Low, x); };

  detail::parallel_for(N, opt.jobs, [&](std::size_t i) {
    const double x = grid[i];
    const double a = v1(x), c = v2(x);
    const bool near = std::any_of(th.begin(), th.end(), [&](double t) {
      return std::abs(x - t) < opt.kink_exclusion + 2.0 * opt.op.fd_step;
    });
    rep.near_threshold[i] = near;
    if (near) {
      auto sided = [&](Phase p, const std::function<double(double)>& w) {
        const double slope = sided_supersolution_slope(surface, p, x, opt.op.fd_step, opt.op.kink_ratio);
        return std::isnan(slope) ? kNaN : operator_L(model, p, w, slope, x, th, opt.op);
      };
      rep.residual_L1[i] = sided(Phase::High, v1);
      rep.residual_L2[i] = sided(Phase::Low, v2);
    } else {
      rep.residual_L1[i] = operator_L(model, Phase::High, v1, x, th, opt.op);
      rep.residual_L2[i] = operator_L(model, Phase::Low, v2, x, th, opt.op);
    }
    rep.switch_slack_12[i] = c + k12 - a;
    rep.switch_slack_21[i] = a + k21 - c;
    vmax[i] = std::max(std::abs(a), std::abs(c));
  });

  double scale = 0.0;
  for (double v : vmax) scale = std::max(scale, v);
  if (!(scale > 0.0)) scale = 1.0;
  const double tol = opt.scale_tol ? opt.tol * scale : opt.tol;
  rep.tolerance = tol;

  const double k10 = m.switching(Phase::High, Phase::Off);
  const double k20 = m.switching(Phase::Low, Phase::Off);
  auto& bc = rep.boundary;
  bc.w1_b = surface.total(Phase::High, b, Side::Left);
  bc.w2_b = surface.total(Phase::Low, b, Side::Left);
  bc.w0_b = surface.objective();
  bc.slack1 = bc.w0_b + k10 - bc.w1_b;
  bc.slack2 = bc.w0_b + k20 - bc.w2_b;
  bc.l0 = operator_L0(model, surface, Selection::Optimal, opt.op);

  std::size_t problems = 0;
  auto flag = [&](const char* what, double x, double v) {
    ++problems;
    if (rep.failures.size() < 32) rep.failures.push_back(describe(what, x, v));
  };
  rep.worst_value = std::numeric_limits<double>::infinity();
  auto track = [&](const char* kind, double x, double v) {
    if (!std::isnan(v) && v < rep.worst_value) {
      rep.worst_value = v;
      rep.worst_x = x;
      rep.worst_kind = kind;
    }
  };
  for (std::size_t i = 0; i < N; ++i) {
    const double x = grid[i];
    const struct {
      const char* name;
      const char* slack_name;
      double L, slack;
    } rows[2] = {{"L1", "slack12", rep.residual_L1[i], rep.switch_slack_12[i]},
                 {"L2", "slack21", rep.residual_L2[i], rep.switch_slack_21[i]}};
    for (const auto& r : rows) {
      track(r.name, x, r.L);
      track(r.slack_name, x, r.slack);
      if (!std::isnan(r.L) && r.L < -tol) flag(r.name, x, r.L);
      if (r.slack < -tol) flag(r.slack_name, x, r.slack);
      if (!rep.near_threshold[i] && !std::isnan(r.L) && std::min(r.L, r.slack) > tol) {
        flag(r.name == std::string("L1") ? "phase 1 HJB min" : "phase 2 HJB min", x,
             std::min(r.L, r.slack));
      }
    }
  }
  if (bc.slack1 < -tol) flag("boundary w0+K10-w1", b, bc.slack1);
  if (bc.slack2 < -tol) flag("boundary w0+K20-w2", b, bc.slack2);
  if (std::abs(bc.l0) > tol) flag("L0 at b", b, bc.l0);
  if (problems > rep.failures.size()) {
    rep.failures.push_back(std::to_string(problems - rep.failures.size()) + " more");
  }
  rep.pass = problems == 0;
  return rep;
}

}  // namespace bandctl
