// SPDX-License-Identifier: MIT
// Exit identities against Monte Carlo passages of the free processes.
#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "bandctl/errors.hpp"
#include "bandctl/passage.hpp"
#include "bandctl/quadrature.hpp"
#include "bandctl/simulate.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;
using fixtures::within_se;

namespace {

constexpr std::size_t kPaths = 100000;

struct Moment {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error of f over independent passages.
Moment passage_moment(const ValidatedModel& model, Phase phase, double lower, double upper,
                      double x0, bool reflect, std::uint64_t seed,
                      const std::function<double(const PassageSample&)>& f) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < kPaths; ++i) {
    const double v = f(simulate_passage(model, phase, lower, upper, x0, reflect, path_seed(seed, i)));
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(kPaths);
  const double mean = s / n;
  return {mean, std::sqrt(std::max(s2 / n - mean * mean, 0.0) / (n - 1.0))};
}

/// Integral of f over [lo, hi], split at the kink k when it lies inside.
double integrate_around(const std::function<double(double)>& f, double lo, double hi, double k) {
  if (k <= lo || k >= hi) return integrate(f, lo, hi);
  return integrate(f, lo, k) + integrate(f, k, hi);
}

}  // namespace

TEST(Passage, TwoSidedExitAgainstSimulation) {
  const auto model = validate(fixtures::example_three());
  const auto s = build_scale(model, Phase::Low);
  const ExitContext ctx(s, 2.468, 10.0);
  const double x = 5.0;
  const auto up = passage_moment(model, Phase::Low, 2.468, 10.0, x, false, 11,
                                 [](const PassageSample& p) { return p.exited_up ? p.discount : 0.0; });
  EXPECT_TRUE(within_se(up.mean, up.se, up_crossing_factor(ctx, x))) << up.mean;
  for (double theta : {0.0, 0.7}) {
    const auto down = passage_moment(model, Phase::Low, 2.468, 10.0, x, false, 12, [&](const PassageSample& p) {
      return p.exited_up ? 0.0 : p.discount * std::exp(theta * (p.level - 2.468));
    });
    EXPECT_TRUE(within_se(down.mean, down.se, exit_down(ctx, x, theta))) << theta;
  }
}

TEST(Passage, ExitFactorsAtTheBoundaries) {
  const auto model = validate(fixtures::example_one());
  const auto s = build_scale(model, Phase::High);
  const ExitContext ctx(s, 1.0, 6.0);
  EXPECT_NEAR(up_crossing_factor(ctx, 6.0), 1.0, 1e-14);
  EXPECT_NEAR(exit_down(ctx, 6.0), 0.0, 1e-12);
  EXPECT_NEAR(up_crossing_factor(ctx, 1.0), s.W(0.0) / s.W(5.0), 1e-14);
  EXPECT_THROW(exit_down(ctx, 0.5, 0.3), Error);
}

TEST(Passage, PotentialDensityAgainstOccupationHistogram) {
  const auto model = validate(fixtures::example_three());
  const auto s = build_scale(model, Phase::Low);
  const double a = 2.0, d = 8.0, x = 5.0;
  const ExitContext ctx(s, a, d);
  const int bins = 12;
  const auto hist = estimate_occupation(model, Phase::Low, a, d, x, kPaths, bins, 21);
  ASSERT_EQ(hist.density.size(), static_cast<std::size_t>(bins));
  int outside = 0;
  for (int k = 0; k < bins; ++k) {
    const double lo = hist.edges[k], hi = hist.edges[k + 1];
    const double exact =
        integrate_around([&](double y) { return potential_density(ctx, x, y); }, lo, hi, x) /
        (hi - lo);
    if (!within_se(hist.density[k], hist.std_error[k], exact, 3.5)) ++outside;
  }
  // Twelve correlated bins at 3.5 SE: a single excursion is tolerated.
  EXPECT_LE(outside, 1);
  const double mass = (1.0 - up_crossing_factor(ctx, x) - exit_down(ctx, x)) / model->q;
  EXPECT_TRUE(within_se(hist.total_mass.mean, hist.total_mass.std_error, mass))
      << hist.total_mass.mean << " vs " << mass;
  const double integral =
      integrate_around([&](double y) { return potential_density(ctx, x, y); }, a, d, x);
  EXPECT_NEAR(integral, mass, 1e-9 * mass);
}

TEST(Passage, ReflectedFactorsAgainstSimulation) {
  const auto model = validate(fixtures::example_one());
  const auto s = build_scale(model, Phase::High);
  const double y1 = 5.077;
  for (double x : {0.0, 2.5}) {
    const auto up = passage_moment(model, Phase::High, 0.0, y1, x, true, 31,
                                   [](const PassageSample& p) { return p.exited_up ? p.discount : 0.0; });
    EXPECT_TRUE(within_se(up.mean, up.se, reflected_up_factor(s, x, y1))) << x;
    const auto lost = passage_moment(model, Phase::High, 0.0, y1, x, true, 32,
                                     [](const PassageSample& p) { return p.lost_demand; });
    EXPECT_TRUE(within_se(lost.mean, lost.se, reflected_local_time(s, x, y1))) << x;
  }
}

TEST(Passage, TransferOperatorAgainstSimulation) {
  const auto model = validate(fixtures::example_three());
  const auto high = build_scale(model, Phase::High);
  const auto low = build_scale(model, Phase::Low);
  const double y2 = 2.468, b = 10.0, x = 6.0;
  const ExitContext ctx(low, y2, b);
  const TransferOperator z1(ctx, high, TransferPayoff::Z1);
  const TransferOperator w1(ctx, high, TransferPayoff::Wbarbar1);
  const auto mz = passage_moment(model, Phase::Low, y2, b, x, false, 41, [&](const PassageSample& p) {
    return p.exited_up ? 0.0 : p.discount * high.Z(p.level);
  });
  EXPECT_TRUE(within_se(mz.mean, mz.se, z1(x))) << mz.mean << " vs " << z1(x);
  const auto mw = passage_moment(model, Phase::Low, y2, b, x, false, 42, [&](const PassageSample& p) {
    return p.exited_up ? 0.0 : p.discount * high.Wbarbar(p.level);
  });
  EXPECT_TRUE(within_se(mw.mean, mw.se, w1(x))) << mw.mean << " vs " << w1(x);
  EXPECT_NEAR(omega2(ctx, high, TransferPayoff::Z1, x), z1(x), 1e-12);
}

TEST(Passage, TransferOperatorVanishesAtTheTop) {
  const auto model = validate(fixtures::example_two());
  const auto high = build_scale(model, Phase::High);
  const auto low = build_scale(model, Phase::Low);
  const ExitContext ctx(low, 6.213, 20.0);
  const TransferOperator z1(ctx, high, TransferPayoff::Z1);
  EXPECT_NEAR(z1(20.0), 0.0, 1e-10);
  // At the lower edge the payoff is collected immediately only from below;
  // from y2 itself a downward exit still needs a jump.
  EXPECT_GT(z1(6.213), 0.0);
  EXPECT_LT(z1(6.213), high.Z(6.213));
}

TEST(Passage, RejectsBadStarts) {
  const auto model = validate(fixtures::example_one());
  EXPECT_THROW(simulate_passage(model, Phase::Off, 0.0, 1.0, 0.5, false, 1), Error);
  EXPECT_THROW(simulate_passage(model, Phase::High, 0.0, 1.0, 1.5, false, 1), Error);
  EXPECT_THROW(simulate_passage(model, Phase::High, 0.5, 1.0, 0.7, true, 1), Error);
}
