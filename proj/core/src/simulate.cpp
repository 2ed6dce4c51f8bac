// SPDX-License-Identifier: MIT
#include "bandctl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bandctl/errors.hpp"
#include "parallel.hpp"

namespace bandctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool overlap(const Interval& a, const Interval& b) noexcept {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (lo < hi) return true;
  return lo == hi && a.contains(lo) && b.contains(lo);
}

bool covers(const Interval& outer, const Interval& inner) noexcept {
  if (inner.lo < outer.lo) return false;
  if (inner.hi < outer.hi) return true;
  return inner.hi == outer.hi && (!outer.open_hi || inner.open_hi);
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
  for (const auto& p : parts_) {
    if (!(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo <= p.hi)) {
      throw Error(ErrorCode::InvalidBand, "interval bounds must be finite and ordered");
    }
  }
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
}

bool IntervalSet::contains(double x) const noexcept {
  return std::any_of(parts_.begin(), parts_.end(),
                     [x](const Interval& p) { return p.contains(x); });
}

double IntervalSet::next_entry_above(double x) const noexcept {
  for (const auto& p : parts_) {
    if (p.lo > x) return p.lo;
  }
  return kInf;
}

bool IntervalSet::intersects(const IntervalSet& other) const noexcept {
  for (const auto& a : parts_) {
    for (const auto& b : other.parts_) {
      if (overlap(a, b)) return true;
    }
  }
  return false;
}

bool IntervalSet::inside(const IntervalSet& other) const noexcept {
  return std::all_of(parts_.begin(), parts_.end(), [&](const Interval& a) {
    return std::any_of(other.parts_.begin(), other.parts_.end(),
                       [&](const Interval& b) { return covers(b, a); });
  });
}

SimStrategy SimStrategy::from(const BandStrategy& band, double b, double l) {
  SimStrategy s;
  const double top = band.y4 ? *band.y4 : b;
  s.switch_high_to_low = IntervalSet({{band.y1, top, false}});
  s.switch_low_to_high = IntervalSet({{l, band.y2, false}});
  if (band.y3 > band.y2) {
    s.restart_high = IntervalSet({{l, band.y3, true}});
  } else {
    s.restart_high = IntervalSet({{l, band.y2, false}});
  }
  s.check();
  return s;
}

void SimStrategy::check() const {
  if (switch_high_to_low.intersects(switch_low_to_high)) {
    throw Error(ErrorCode::InvalidBand, "switching zones of the two phases overlap");
  }
  if (!switch_low_to_high.inside(restart_high)) {
    throw Error(ErrorCode::InvalidBand, "zone switching to phase 1 must lie in the restart zone");
  }
  if (switch_high_to_low.intersects(restart_high)) {
    throw Error(ErrorCode::InvalidBand, "zone switching to phase 2 must avoid the restart zone");
  }
}

double default_horizon(const ModelConfig& m) noexcept { return std::log(1e4) / m.q; }

std::uint64_t path_seed(std::uint64_t base_seed, std::uint64_t path) noexcept {
  // splitmix64 applied to a counter offset by the base seed.
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ull * (path + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double pairwise_sum(const double* v, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

namespace {

/// Uniform on (0, 1].
double unit_open_low(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double exp_sample(std::mt19937_64& rng, double rate) { return -std::log(unit_open_low(rng)) / rate; }

/// Integral over [0, dt] of e^{-qs} and of s e^{-qs}.
void discount_moments(double q, double dt, double& e1, double& e2) {
  const double z = q * dt;
  if (z < 1e-4) {
    e1 = dt * (1.0 - z / 2.0 + z * z / 6.0);
    e2 = dt * dt * (0.5 - z / 3.0 + z * z / 8.0);
    return;
  }
  e1 = -std::expm1(-z) / q;
  e2 = (e1 - dt * std::exp(-z)) / q;
}

struct Walker {
  const ModelConfig& m;
  const SimOptions& opt;
  std::mt19937_64 rng;
  double horizon;
  double t = 0.0;
  double disc = 1.0;
  double x = 0.0;
  Phase phase = Phase::Off;
  PathCost cost;

  Walker(const ModelConfig& model, const SimOptions& o, std::uint64_t seed)
      : m(model), opt(o), rng(seed), horizon(o.horizon > 0.0 ? o.horizon : default_horizon(model)) {}

  double demand() {
    if (opt.demand_quantile) {
      return opt.demand_quantile(1.0 - unit_open_low(rng) * (1.0 - 0x1.0p-53));
    }
    const auto& atoms = m.demand.atoms();
    if (atoms.size() == 1) return exp_sample(rng, atoms.front().rate);
    double u = 1.0 - unit_open_low(rng);
    for (const auto& a : atoms) {
      if (u < a.weight) return exp_sample(rng, a.rate);
      u -= a.weight;
    }
    return exp_sample(rng, atoms.back().rate);
  }

  /// Holding cost on [t, t+dt] along x + sigma s; advances t and disc but not x.
  double hold(double dt, double rate_a, double rate_c, double sigma) {
    double e1 = 0.0;
    double e2 = 0.0;
    discount_moments(m.q, dt, e1, e2);
    double value = 0.0;
    if (opt.holding_rate && phase != Phase::Off) {
      value = disc * numeric_hold(dt, sigma);
    } else {
      value = disc * ((rate_a + rate_c * x) * e1 + rate_c * sigma * e2);
    }
    t += dt;
    disc *= std::exp(-m.q * dt);
    return value;
  }

  // Composite two-point Gauss rule; tolerates jumps of h between nodes.
  double numeric_hold(double dt, double sigma) {
    const int cells = std::max(1, static_cast<int>(std::ceil(dt / 0.01)));
    const double w = dt / cells;
    const double g = w / (2.0 * std::sqrt(3.0));
    double s = 0.0;
    for (int k = 0; k < cells; ++k) {
      const double mid = (k + 0.5) * w;
      for (double u : {mid - g, mid + g}) {
        s += 0.5 * w * std::exp(-m.q * u) * opt.holding_rate(phase, x + sigma * u);
      }
    }
    return s;
  }

  void pay_switch(Phase to) {
    cost.switching += disc * m.switching(phase, to);
    phase = to;
  }

  void lose(double below) { cost.shortage += disc * m.penalty(below); }

  const IntervalSet& zone(const SimStrategy& s) const {
    return phase == Phase::High ? s.switch_high_to_low : s.switch_low_to_high;
  }

  /// Applies immediate switches at the current level (at most one per phase).
  void settle(const SimStrategy& s) {
    for (int guard = 0; guard < 2 && phase != Phase::Off; ++guard) {
      if (x >= m.b) {
        pay_switch(Phase::Off);
        x = m.b;
        return;
      }
      if (!zone(s).contains(x)) return;
      pay_switch(other(phase));
    }
  }

  /// Runs until the horizon or, with stop_at_shutdown, until entering (b, Off).
  /// Returns true when it stopped in the shutdown state.
  bool run(const SimStrategy& s, bool stop_at_shutdown) {
    settle(s);
    while (t < horizon) {
      if (phase == Phase::Off) {
        if (stop_at_shutdown) return true;
        const double gap = exp_sample(rng, m.lambda);
        const double left = horizon - t;
        cost.holding += hold(std::min(gap, left), m.h0_b, 0.0, 0.0);
        if (gap >= left) break;
        const double land = m.b - demand();
        x = land;
        if (land < m.l) {
          lose(m.l - land);
          x = m.l;
        }
        pay_switch(s.restart_high.contains(x) ? Phase::High : Phase::Low);
        settle(s);
        continue;
      }
      const double sigma = m.sigma(phase);
      const HoldingCost& h = m.holding(phase);
      const double gap = exp_sample(rng, m.lambda);
      const double to_top = (m.b - x) / sigma;
      const double to_zone = (zone(s).next_entry_above(x) - x) / sigma;
      const double drift_stop = std::min(to_top, to_zone);
      const double left = horizon - t;
      const double dt = std::min({gap, drift_stop, left});
      cost.holding += hold(dt, h.a, h.c, sigma);
      if (left < gap && left < drift_stop) break;
      if (drift_stop < gap) {
        // Reached b or a switching zone before the next demand.
        if (to_top <= to_zone) {
          x = m.b;
          pay_switch(Phase::Off);
        } else {
          x = zone(s).next_entry_above(x);
          pay_switch(other(phase));
        }
        continue;
      }
      x += sigma * dt - demand();
      if (x < m.l) {
        lose(m.l - x);
        x = m.l;
      }
      settle(s);
    }
    return false;
  }
};

void check_start(const ModelConfig& m, double x0, Phase phase0) {
  if (!std::isfinite(x0) || x0 < m.l || x0 > m.b) {
    throw Error(ErrorCode::InvalidStart, "start level must lie in [l, b]");
  }
  if (phase0 == Phase::Off && x0 != m.b) {
    throw Error(ErrorCode::InvalidStart, "production can only be off at b");
  }
}

Estimate summarize(std::vector<double>& v) {
  const std::size_t n = v.size();
  Estimate e;
  e.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  for (auto& x : v) x = (x - e.mean) * (x - e.mean);
  const double var = n > 1 ? pairwise_sum(v.data(), n) / static_cast<double>(n - 1) : 0.0;
  e.std_error = std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace

PathCost simulate_path(const ValidatedModel& model, const SimStrategy& strategy, double x0,
                       Phase phase0, std::uint64_t seed, const SimOptions& opt) {
  check_start(model.config(), x0, phase0);
  Walker w(model.config(), opt, seed);
  w.x = x0;
  w.phase = phase0;
  w.run(strategy, false);
  return w.cost;
}

std::vector<SimEstimate> estimate_cost_many(const ValidatedModel& model,
                                            const SimStrategy& strategy,
                                            const std::vector<SimStart>& starts,
                                            std::size_t n_paths, std::uint64_t base_seed,
                                            const SimOptions& opt) {
  const ModelConfig& m = model.config();
  if (n_paths < 2) throw Error(ErrorCode::InvalidParameter, "need at least two paths");
  for (const auto& s : starts) check_start(m, s.x0, s.phase);

  std::vector<PathCost> tail(n_paths);
  detail::parallel_for(n_paths, opt.jobs, [&](std::size_t k) {
    Walker w(m, opt, path_seed(base_seed, 2 * k + 1));
    w.x = m.b;
    w.phase = Phase::Off;
    w.run(strategy, false);
    tail[k] = w.cost;
  });

  std::vector<SimEstimate> out;
  out.reserve(starts.size());
  std::vector<PathCost> paths(n_paths);
  for (const auto& start : starts) {
    detail::parallel_for(n_paths, opt.jobs, [&](std::size_t k) {
      Walker w(m, opt, path_seed(base_seed, 2 * k));
      w.x = start.x0;
      w.phase = start.phase;
      PathCost c = w.cost;
      if (w.run(strategy, true)) {
        c = w.cost;
        c.holding += w.disc * tail[k].holding;
        c.shortage += w.disc * tail[k].shortage;
        c.switching += w.disc * tail[k].switching;
      } else {
        c = w.cost;
      }
      paths[k] = c;
    });
    SimEstimate est;
    est.n_paths = n_paths;
    est.truncation_horizon = opt.horizon > 0.0 ? opt.horizon : default_horizon(m);
    std::vector<double> v(n_paths);
    auto component = [&](auto pick) {
      for (std::size_t k = 0; k < n_paths; ++k) v[k] = pick(paths[k]);
      return summarize(v);
    };
    est.holding = component([](const PathCost& c) { return c.holding; });
    est.shortage = component([](const PathCost& c) { return c.shortage; });
    est.switching = component([](const PathCost& c) { return c.switching; });
    const Estimate total = component([](const PathCost& c) { return c.total(); });
    est.mean = est.holding.mean + est.shortage.mean + est.switching.mean;
    est.std_error = total.std_error;
    out.push_back(est);
  }
  return out;
}

SimEstimate estimate_cost(const ValidatedModel& model, const SimStrategy& strategy, double x0,
                          Phase phase0, std::size_t n_paths, std::uint64_t base_seed,
                          const SimOptions& opt) {
  return estimate_cost_many(model, strategy, {{x0, phase0}}, n_paths, base_seed, opt).front();
}

PassageSample simulate_passage(const ValidatedModel& model, Phase phase, double lower,
                               double upper, double x0, bool reflect_at_zero, std::uint64_t seed,
                               const SimOptions& opt) {
  const ModelConfig& m = model.config();
  if (phase == Phase::Off || !(lower < upper) || !(x0 >= lower && x0 <= upper)) {
    throw Error(ErrorCode::InvalidStart, "passage needs a producing phase and lower <= x0 <= upper");
  }
  if (reflect_at_zero && lower != 0.0) {
    throw Error(ErrorCode::InvalidParameter, "reflection is at level 0");
  }
  Walker w(m, opt, seed);
  w.x = x0;
  w.phase = phase;
  const double sigma = m.sigma(phase);
  const HoldingCost& h = m.holding(phase);
  PassageSample out;
  while (w.t < w.horizon) {
    const double gap = exp_sample(w.rng, m.lambda);
    const double to_top = (upper - w.x) / sigma;
    const double left = w.horizon - w.t;
    out.holding += w.hold(std::min({gap, to_top, left}), h.a, h.c, sigma);
    if (left < gap && left < to_top) break;
    if (to_top < gap) {
      out.exited_up = true;
      out.level = upper;
      out.time = w.t;
      out.discount = w.disc;
      return out;
    }
    w.x += sigma * gap - w.demand();
    if (w.x < lower) {
      if (!reflect_at_zero) {
        out.level = w.x;
        out.time = w.t;
        out.discount = w.disc;
        return out;
      }
      out.lost_demand += w.disc * (lower - w.x);
      out.shortage += w.disc * m.penalty(lower - w.x);
      w.x = lower;
    }
  }
  out.time = w.horizon;
  return out;
}

OccupationHistogram estimate_occupation(const ValidatedModel& model, Phase phase, double a,
                                        double d, double x0, std::size_t n_paths, int bins,
                                        std::uint64_t base_seed, const SimOptions& opt) {
  const ModelConfig& m = model.config();
  if (phase == Phase::Off || !(a < d) || !(x0 >= a && x0 <= d) || bins < 1 || n_paths < 2) {
    throw Error(ErrorCode::InvalidParameter, "occupation needs a < d, a <= x0 <= d, bins >= 1");
  }
  const auto nb = static_cast<std::size_t>(bins);
  const double width = (d - a) / bins;
  const double sigma = m.sigma(phase);

  // Blocks of fixed size keep the reduction order independent of the worker count.
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<double> sum(blocks * (nb + 1), 0.0);
  std::vector<double> sq(blocks * (nb + 1), 0.0);

  detail::parallel_for(blocks, opt.jobs, [&](std::size_t blk) {
    std::vector<double> path(nb, 0.0);
    double* bs = &sum[blk * (nb + 1)];
    double* bq = &sq[blk * (nb + 1)];
    const std::size_t end = std::min(n_paths, (blk + 1) * kBlock);
    for (std::size_t k = blk * kBlock; k < end; ++k) {
      std::fill(path.begin(), path.end(), 0.0);
      Walker w(m, opt, path_seed(base_seed, k));
      w.x = x0;
      w.phase = phase;
      while (w.t < w.horizon && w.x < d) {
        const double gap = exp_sample(w.rng, m.lambda);
        const double dt = std::min({gap, (d - w.x) / sigma, w.horizon - w.t});
        const double top = w.x + sigma * dt;
        // Time spent in each bin along the linear segment [x, top].
        auto first = static_cast<std::size_t>(std::max(0.0, std::floor((w.x - a) / width)));
        for (std::size_t j = std::min(first, nb - 1); j < nb; ++j) {
          const double lo = std::max(a + j * width, w.x);
          const double hi = std::min(a + (j + 1) * width, top);
          if (hi <= lo) {
            if (a + j * width >= top) break;
            continue;
          }
          const double s0 = (lo - w.x) / sigma;
          const double s1 = (hi - w.x) / sigma;
          path[j] += w.disc * (std::exp(-m.q * s0) - std::exp(-m.q * s1)) / m.q;
        }
        w.t += dt;
        w.disc *= std::exp(-m.q * dt);
        if (dt < gap) break;
        w.x = top - w.demand();
        if (w.x < a) break;
      }
      double mass = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        bs[j] += path[j];
        bq[j] += path[j] * path[j];
        mass += path[j];
      }
      bs[nb] += mass;
      bq[nb] += mass * mass;
    }
  });

  OccupationHistogram out;
  out.edges.resize(nb + 1);
  for (std::size_t j = 0; j <= nb; ++j) out.edges[j] = a + j * width;
  out.density.resize(nb);
  out.std_error.resize(nb);
  const double n = static_cast<double>(n_paths);
  std::vector<double> col(blocks);
  auto reduce = [&](const std::vector<double>& src, std::size_t j) {
    for (std::size_t blk = 0; blk < blocks; ++blk) col[blk] = src[blk * (nb + 1) + j];
    return pairwise_sum(col.data(), blocks);
  };
  auto estimate = [&](std::size_t j) {
    const double mean = reduce(sum, j) / n;
    const double var = std::max(0.0, (reduce(sq, j) - n * mean * mean) / (n - 1.0));
    return Estimate{mean, std::sqrt(var / n)};
  };
  for (std::size_t j = 0; j < nb; ++j) {
    const Estimate e = estimate(j);
    out.density[j] = e.mean / width;
    out.std_error[j] = e.std_error / width;
  }
  out.total_mass = estimate(nb);
  return out;
}

}  // namespace bandctl
