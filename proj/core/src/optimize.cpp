// SPDX-License-Identifier: MIT
#include "bandctl/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "bandctl/cost_two.hpp"
#include "bandctl/errors.hpp"
#include "parallel.hpp"

namespace bandctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Clearance kept between thresholds and from b during the search.
constexpr double kClear = 1e-6;

using Point = std::vector<double>;

double safe_eval(const std::function<double(const Point&)>& f, const Point& p) {
  try {
    const double v = f(p);
    return std::isnan(v) ? kInf : v;
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Point&)>& f,
                             const std::function<Point(Point)>& project, Point start, Point step,
                             const NelderMeadOptions& opt) {
  const std::size_t n = start.size();
  if (n == 0 || step.size() != n) {
    throw Error(ErrorCode::InvalidParameter, "simplex start and step sizes differ");
  }
  NelderMeadResult out;
  auto eval = [&](Point& p) {
    p = project(std::move(p));
    ++out.evaluations;
    return safe_eval(f, p);
  };

  std::vector<Point> simplex(n + 1, start);
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) value[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    std::vector<Point> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = simplex[order[i]];
      v[i] = value[order[i]];
    }
    simplex.swap(s);
    value.swap(v);
  };
  auto along = [&](const Point& c, const Point& w, double t) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = c[i] + t * (w[i] - c[i]);
    return p;
  };

  while (out.evaluations < opt.max_evaluations) {
    sort_simplex();
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[0][j]));
      }
    }
    const double spread = value[n] - value[0];
    if (diameter <= opt.x_tol && (spread <= opt.f_tol || !std::isfinite(value[n]))) {
      out.converged = std::isfinite(value[0]);
      break;
    }
    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }
    Point reflected = along(centroid, simplex[n], -1.0);
    const double fr = eval(reflected);
    if (fr < value[0]) {
      Point expanded = along(centroid, simplex[n], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[n] = std::move(expanded);
        value[n] = fe;
      } else {
        simplex[n] = std::move(reflected);
        value[n] = fr;
      }
      continue;
    }
    if (fr < value[n - 1]) {
      simplex[n] = std::move(reflected);
      value[n] = fr;
      continue;
    }
    const bool outside = fr < value[n];
    Point contracted = along(centroid, simplex[n], outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : value[n])) {
      simplex[n] = std::move(contracted);
      value[n] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      simplex[i] = along(simplex[0], simplex[i], 0.5);
      value[i] = eval(simplex[i]);
    }
  }
  sort_simplex();
  out.x = simplex[0];
  out.value = value[0];
  return out;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

namespace {

/// Lattice scan, then a polish from the winner and from perturbed copies of
/// the best lattice points.
BandSearch search(const std::function<double(const Point&)>& objective,
                  const std::function<Point(Point)>& project, std::vector<Point> lattice,
                  double cell, const OptimizeOptions& opt,
                  const std::function<BandStrategy(const Point&)>& to_strategy) {
  std::vector<double> values(lattice.size());
  detail::parallel_for(lattice.size(), opt.jobs,
                       [&](std::size_t i) { values[i] = safe_eval(objective, lattice[i]); });
  std::vector<std::size_t> rank(lattice.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (rank.empty() || !std::isfinite(values[rank.front()])) {
    throw Error(ErrorCode::NoFeasiblePoint, "no lattice point has a finite cost");
  }

  const std::size_t runs = 1 + static_cast<std::size_t>(std::max(opt.restarts, 0));
  std::vector<Point> starts(runs);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jitter(-0.5 * cell, 0.5 * cell);
  starts[0] = lattice[rank[0]];
  for (std::size_t r = 1; r < runs; ++r) {
    Point p = lattice[rank[(r - 1) % rank.size()]];
    for (auto& v : p) v += jitter(rng);
    starts[r] = project(std::move(p));
  }

  std::vector<NelderMeadResult> polished(runs);
  detail::parallel_for(runs, opt.jobs, [&](std::size_t r) {
    polished[r] = nelder_mead(objective, project, starts[r],
                              Point(starts[r].size(), cell), opt.polish);
  });

  BandSearch out;
  out.evaluations = static_cast<int>(lattice.size());
  std::size_t best = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    out.evaluations += polished[r].evaluations;
    if (polished[r].value < polished[best].value) best = r;
  }
  out.strategy = to_strategy(polished[best].x);
  out.objective = polished[best].value;
  return out;
}

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

BandSearch optimize_doshi(const ValidatedModel& model, const OptimizeOptions& opt) {
  const double b = model->b;
  const int n = std::max(opt.lattice_doshi, 2);
  auto project = [b](Point p) {
    p[1] = clamp(p[1], kClear, b - kClear);
    p[0] = clamp(p[0], 0.0, p[1] - kClear);
    return p;
  };
  auto objective = [&](const Point& p) {
    return level_b_objective(model, BandOne{p[0], p[0], p[1]}, opt.engine);
  };
  std::vector<Point> lattice;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) lattice.push_back({b * i / n, b * j / n});
  }
  return search(objective, project, std::move(lattice), b / n, opt, [](const Point& p) {
    return BandStrategy::from(BandOne{p[0], p[0], p[1]});
  });
}

BandSearch optimize_type_one(const ValidatedModel& model, const OptimizeOptions& opt) {
  const double b = model->b;
  const int n = std::max(opt.lattice_one, 2);
  auto project = [b](Point p) {
    p[2] = clamp(p[2], kClear, b - kClear);
    p[1] = clamp(p[1], 0.0, p[2] - kClear);
    p[0] = clamp(p[0], 0.0, p[1]);
    return p;
  };
  auto objective = [&](const Point& p) {
    return level_b_objective(model, BandOne{p[0], p[1], p[2]}, opt.engine);
  };
  std::vector<Point> lattice;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) lattice.push_back({b * i / n, b * j / n, b * k / n});
    }
  }
  return search(objective, project, std::move(lattice), b / n, opt, [](const Point& p) {
    return BandStrategy::from(BandOne{p[0], p[1], p[2]});
  });
}

double upper_component_score(const ValidatedModel& model, const BandOne& lower, double y4,
                             int probes, const EngineOptions& engine) {
  const double b = model->b;
  const CostSurface s = total_cost_two(model, {lower.y2, lower.y3, lower.y1, y4}, engine);
  double worst = -kInf;
  for (int k = 0; k < probes; ++k) {
    const double x = lower.y1 + (b - lower.y1) * (k + 0.5) / probes;
    worst = std::max(worst, s.total(Phase::High, x));
  }
  return worst;
}

BandSearch optimize_type_two(const ValidatedModel& model, const BandOne& lower,
                             const OptimizeOptions& opt) {
  check_band(lower, model->b);
  const double b = model->b;
  const double lo = lower.y1 + kClear;
  const double hi = b - kClear;
  const int probes = std::max(opt.y4_probes, 1);
  BandSearch out;
  std::atomic<int> evaluations{0};
  auto score = [&](double y4) {
    ++evaluations;
    try {
      return upper_component_score(model, lower, y4, probes, opt.engine);
    } catch (const Error& e) {
      if (is_validation_error(e.code())) throw;
      return kInf;
    }
  };
  // The score need not be unimodal: bracket the best of a coarse scan first.
  const int coarse = probes;
  std::vector<double> ys(coarse);
  std::vector<double> vs(coarse);
  for (int k = 0; k < coarse; ++k) ys[k] = lo + (hi - lo) * (k + 0.5) / coarse;
  detail::parallel_for(static_cast<std::size_t>(coarse), opt.jobs, [&](std::size_t k) {
    vs[k] = score(ys[k]);
  });
  const auto best = static_cast<int>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  if (!std::isfinite(vs[best])) {
    throw Error(ErrorCode::NoFeasiblePoint, "no upper component start has a finite cost");
  }
  const double a = best == 0 ? lo : ys[best - 1];
  const double c = best == coarse - 1 ? hi : ys[best + 1];
  double y4 = golden_section(score, a, c, opt.y4_tol);
  if (score(y4) > vs[best]) y4 = ys[best];
  out.strategy = BandStrategy::from(BandTwo{lower.y2, lower.y3, lower.y1, y4});
  out.objective = level_b_objective(model, lower, opt.engine);
  out.evaluations = evaluations.load();
  return out;
}

CostSurface build_surface(const ValidatedModel& model, const BandStrategy& strategy,
                          const EngineOptions& engine) {
  if (strategy.y4) {
    return total_cost_two(model, {strategy.y2, strategy.y3, strategy.y1, *strategy.y4}, engine);
  }
  return total_cost(model, strategy.lower(), engine);
}

OptimizationResult escalate(const ValidatedModel& model, StrategyKind first, StrategyKind last,
                            const OptimizeOptions& opt, const VerifyOptions& vopt) {
  if (static_cast<int>(first) > static_cast<int>(last)) {
    throw Error(ErrorCode::InvalidParameter, "escalation range is empty");
  }
  OptimizationResult out;
  std::optional<BandOne> type_one;
  for (int k = static_cast<int>(first); k <= static_cast<int>(last); ++k) {
    const auto kind = static_cast<StrategyKind>(k);
    EscalationStage stage;
    switch (kind) {
      case StrategyKind::Doshi: stage.search = optimize_doshi(model, opt); break;
      case StrategyKind::TypeOne:
        stage.search = optimize_type_one(model, opt);
        type_one = stage.search.strategy.lower();
        break;
      case StrategyKind::TypeTwo:
        if (!type_one) type_one = optimize_type_one(model, opt).strategy.lower();
        stage.search = optimize_type_two(model, *type_one, opt);
        break;
    }
    const CostSurface surface = build_surface(model, stage.search.strategy, opt.engine);
    stage.report = verify_strategy(model, surface, vopt);
    out.strategy = stage.search.strategy;
    out.objective = surface.objective();
    out.level_b = surface.level_b();
    out.report = stage.report;
    out.verified = stage.report.pass;
    out.stages.push_back(std::move(stage));
    if (out.verified) break;
  }
  return out;
}

}  // namespace bandctl
