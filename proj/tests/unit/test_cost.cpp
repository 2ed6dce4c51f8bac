// SPDX-License-Identifier: MIT
// Cost assemblies: local pieces against simulation, closed forms against
// quadrature, and the structural identities of the band surfaces.
#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "bandctl/cost_one.hpp"
#include "bandctl/cost_two.hpp"
#include "bandctl/passage.hpp"
#include "bandctl/simulate.hpp"
#include "engine.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;
using fixtures::within_se;

namespace {

constexpr std::size_t kPaths = 100000;

struct Moment {
  double mean = 0.0;
  double se = 0.0;
};

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

const BandOne kBandThree = fixtures::kReportedBandThree.lower();

}  // namespace

TEST(CostOne, TwoSidedHoldingAgainstSimulation) {
  const auto model = validate(fixtures::example_three());
  for (double x : {kBandThree.y2, 6.0, 9.9}) {
    const auto mc = passage_moment(model, Phase::Low, kBandThree.y2, model->b, x, false, 51,
                                   [](const PassageSample& p) { return p.holding; });
    EXPECT_TRUE(within_se(mc.mean, mc.se, holding_exit_two_sided(model, kBandThree, x)))
        << x << ": " << mc.mean << " vs " << holding_exit_two_sided(model, kBandThree, x);
  }
}

TEST(CostOne, ReflectedHoldingAndShortageAgainstSimulation) {
  const auto model = validate(fixtures::example_one());
  const BandOne band = fixtures::kReportedBandOne;
  for (double x : {0.0, 1.0, 4.5}) {
    const auto h = passage_moment(model, Phase::High, 0.0, band.y1, x, true, 61,
                                  [](const PassageSample& p) { return p.holding; });
    EXPECT_TRUE(within_se(h.mean, h.se, holding_reflected(model, band, x))) << x;
    const auto s = passage_moment(model, Phase::High, 0.0, band.y1, x, true, 62,
                                  [](const PassageSample& p) { return p.shortage; });
    EXPECT_TRUE(within_se(s.mean, s.se, shortage_reflected(model, band, x))) << x;
  }
}

TEST(CostOne, ClosedFormTransfersMatchQuadrature) {
  const BandOne bands[] = {fixtures::kReportedBandOne, fixtures::kReportedBandTwo, kBandThree};
  const ModelConfig cfgs[] = {fixtures::example_one(), fixtures::example_two(),
                              fixtures::example_three()};
  for (int i = 0; i < 3; ++i) {
    const auto model = validate(cfgs[i]);
    const detail::TypeOneEngine engine(model, bands[i], {});
    const ExitContext ctx(engine.low(), bands[i].y2, model->b);
    const TransferOperator z1(ctx, engine.high(), TransferPayoff::Z1);
    const TransferOperator w1(ctx, engine.high(), TransferPayoff::Wbarbar1);
    for (int k = 0; k <= 10; ++k) {
      const double x = bands[i].y2 + (model->b - bands[i].y2) * k / 10.0;
      const auto closed = engine.transfer_closed(x);
      EXPECT_NEAR(closed[0], z1(x), 1e-10 * std::max(1.0, std::abs(z1(x)))) << i << " " << x;
      EXPECT_NEAR(closed[1], w1(x), 1e-10 * std::max(1.0, std::abs(w1(x)))) << i << " " << x;
    }
  }
}

TEST(CostOne, ComponentIdentitiesOnExampleOne) {
  const auto model = validate(fixtures::example_one());
  const auto& k = model->switching;
  for (const BandOne band : {fixtures::kReportedBandOne, BandOne{0.0, 0.0, 3.374}, BandOne{0.8, 1.2, 6.0}}) {
    const CostSurface s = total_cost(model, band);
    for (int j = 0; j <= 20; ++j) {
      const double x = band.y2 * j / 20.0;
      EXPECT_NEAR(s.total(Phase::Low, x) - s.total(Phase::High, x), k(Phase::Low, Phase::High), 1e-8);
    }
    for (int j = 0; j < 20; ++j) {
      const double x = band.y1 + (model->b - band.y1) * j / 20.0;
      EXPECT_NEAR(s.total(Phase::Low, x) - s.total(Phase::High, x), -k(Phase::High, Phase::Low), 1e-8);
    }
    const CostParts one = s.at(Phase::High, model->b), two = s.at(Phase::Low, model->b);
    const CostParts zero = s.level_b();
    EXPECT_NEAR(two.total() - zero.total(), k(Phase::Low, Phase::Off), 1e-8);
    EXPECT_NEAR(one.total() - zero.total(), k(Phase::High, Phase::Low) + k(Phase::Low, Phase::Off), 1e-8);
    EXPECT_NEAR(two.holding, zero.holding, 1e-6);
    EXPECT_NEAR(one.holding, zero.holding, 1e-6);
    EXPECT_NEAR(two.shortage, zero.shortage, 1e-6);
    EXPECT_NEAR(one.shortage, zero.shortage, 1e-6);
    if (band.y2 > 0.0) {
      const CostParts below = s.at(Phase::Low, band.y2, Side::Left);
      const CostParts above = s.at(Phase::Low, band.y2, Side::Right);
      EXPECT_GT(below.holding, above.holding);
      EXPECT_LT(below.shortage, above.shortage);
    }
  }
}

TEST(CostOne, ProfilesAddUpToTheSurface) {
  const auto model = validate(fixtures::example_two());
  const BandOne band = fixtures::kReportedBandTwo;
  const CostSurface s = total_cost(model, band);
  const auto h = holding_assemble(model, band);
  const auto sh = shortage_assemble(model, band);
  const auto k = switching_assemble(model, band);
  EXPECT_NEAR(h.level_b + sh.level_b + k.level_b, s.objective(), 1e-10);
  EXPECT_NEAR(level_b_objective(model, band), s.objective(), 1e-10);
  for (double x : {0.0, 3.0, band.y1 - 0.5}) {
    EXPECT_NEAR(h.phase1(x), s.at(Phase::High, x).holding, 1e-10);
    EXPECT_NEAR(sh.phase1(x), s.at(Phase::High, x).shortage, 1e-10);
    EXPECT_NEAR(k.phase1(x), s.at(Phase::High, x).switching, 1e-10);
  }
  for (double x : {band.y2 + 0.1, 12.0, 19.5}) {
    EXPECT_NEAR(h.phase2(x), s.at(Phase::Low, x).holding, 1e-10);
    EXPECT_NEAR(sh.phase2(x), s.at(Phase::Low, x).shortage, 1e-10);
    EXPECT_NEAR(k.phase2(x), s.at(Phase::Low, x).switching, 1e-10);
  }
}

TEST(CostOne, ComponentsAreNonNegative) {
  for (const auto& cfg : {fixtures::example_one(), fixtures::example_two(), fixtures::example_three()}) {
    const auto model = validate(cfg);
    const BandOne band{0.25 * cfg.b, 0.35 * cfg.b, 0.6 * cfg.b};
    const CostSurface s = total_cost(model, band);
    for (int j = 0; j <= 40; ++j) {
      const double x = cfg.b * j / 40.0;
      for (Phase p : {Phase::High, Phase::Low}) {
        const CostParts c = s.at(p, x);
        EXPECT_GE(c.holding, 0.0);
        EXPECT_GE(c.shortage, 0.0);
        EXPECT_GE(c.switching, -1e-12);
      }
    }
  }
}

TEST(CostOne, RejectsInvalidBands) {
  const auto model = validate(fixtures::example_one());
  EXPECT_THROW(total_cost(model, BandOne{2.0, 1.0, 5.0}), Error);
  EXPECT_THROW(total_cost(model, BandOne{1.0, 1.0, 10.0}), Error);
  EXPECT_THROW(total_cost(model, BandOne{-0.1, 0.0, 5.0}), Error);
}

TEST(CostTwo, UpperComponentAtCapacityApproachesTypeOne) {
  const auto model = validate(fixtures::example_three());
  const BandTwo band{kBandThree.y2, kBandThree.y3, kBandThree.y1, model->b - 1e-3};
  const CostSurface one = total_cost(model, kBandThree);
  const CostSurface two = total_cost_two(model, band);
  for (int j = 0; j < 10; ++j) {
    const double x = model->b * j / 10.0;
    for (Phase p : {Phase::High, Phase::Low}) {
      EXPECT_NEAR(two.total(p, x), one.total(p, x), 1e-4) << x;
    }
  }
}

TEST(CostTwo, ReachingCapacityInPhaseOnePaysTheShutdownFee) {
  const auto model = validate(fixtures::example_three());
  const CostSurface s = total_cost_two(model, fixtures::kReportedBandThree);
  const CostParts top = s.at(Phase::High, model->b);
  EXPECT_NEAR(top.switching - s.level_b().switching, model->switching(Phase::High, Phase::Off), 1e-8);
  EXPECT_NEAR(top.holding, s.level_b().holding, 1e-6);
  EXPECT_NEAR(top.shortage, s.level_b().shortage, 1e-6);
}

TEST(CostTwo, LevelValueDoesNotDependOnTheUpperComponent) {
  const auto model = validate(fixtures::example_three());
  const auto lower = fixtures::kReportedBandThree.lower();
  const double ref = total_cost(model, lower).objective();
  for (double y4 : {lower.y1 + 0.5, 7.66, model->b - 0.5}) {
    const BandTwo band{lower.y2, lower.y3, lower.y1, y4};
    EXPECT_NEAR(total_cost_two(model, band).objective(), ref, 1e-9) << y4;
  }
}

TEST(CostTwo, UpperComponentAgainstSimulation) {
  const auto model = validate(fixtures::example_three());
  const auto band = fixtures::kReportedBandThree;
  const CostSurface s = total_cost_two(model, band);
  const SimStrategy sim = SimStrategy::from(BandStrategy::from(band), model->b);
  const std::vector<SimStart> starts{{8.0, Phase::High}, {9.5, Phase::High}, {6.0, Phase::Low}};
  const auto est = estimate_cost_many(model, sim, starts, 40000, 71);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const CostParts a = s.at(starts[i].phase, starts[i].x0);
    EXPECT_TRUE(within_se(est[i].mean, est[i].std_error, a.total())) << starts[i].x0;
    EXPECT_TRUE(within_se(est[i].holding.mean, est[i].holding.std_error, a.holding));
    EXPECT_TRUE(within_se(est[i].shortage.mean, est[i].shortage.std_error, a.shortage));
    EXPECT_TRUE(within_se(est[i].switching.mean, est[i].switching.std_error, a.switching));
  }
}
