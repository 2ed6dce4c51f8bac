// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>

#include "bandctl/cost_two.hpp"
#include "bandctl/optimize.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;

TEST(NelderMead, Rosenbrock) {
  const auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto id = [](std::vector<double> x) { return x; };
  NelderMeadOptions opt;
  opt.x_tol = 1e-8;
  opt.f_tol = 1e-14;
  opt.max_evaluations = 20000;
  const auto r = nelder_mead(f, id, {-1.2, 1.0}, {0.5, 0.5}, opt);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, ProjectionKeepsIteratesFeasible) {
  const auto f = [](const std::vector<double>& x) { return std::pow(x[0] + 3.0, 2); };
  const auto clamp = [](std::vector<double> x) {
    x[0] = std::max(x[0], 0.0);
    return x;
  };
  const auto r = nelder_mead(f, clamp, {2.0}, {1.0});
  EXPECT_NEAR(r.x[0], 0.0, 1e-4);
}

TEST(NelderMead, FailingEvaluationsCountAsInfinite) {
  const auto f = [](const std::vector<double>& x) {
    if (x[0] < 0.5) throw Error(ErrorCode::InvalidBand, "outside");
    return (x[0] - 1.0) * (x[0] - 1.0);
  };
  const auto id = [](std::vector<double> x) { return x; };
  const auto r = nelder_mead(f, id, {2.0}, {1.5});
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
}

TEST(GoldenSection, FindsQuadraticMinimum) {
  EXPECT_NEAR(golden_section([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-8), 0.3, 1e-7);
  EXPECT_NEAR(golden_section([](double x) { return x; }, 1.0, 2.0, 1e-8), 1.0, 1e-7);
}

TEST(Optimize, DoshiWinnerIsALocalMinimum) {
  const auto model = validate(fixtures::example_one());
  const BandSearch s = optimize_doshi(model);
  EXPECT_EQ(s.strategy.kind, StrategyKind::Doshi);
  EXPECT_EQ(s.strategy.y2, s.strategy.y3);
  const double v = s.objective;
  EXPECT_NEAR(level_b_objective(model, s.strategy.lower()), v, 1e-12);
  for (double d : {-0.02, 0.02}) {
    const BandOne near{std::max(0.0, s.strategy.y2 + d), std::max(0.0, s.strategy.y2 + d), s.strategy.y1};
    EXPECT_GE(level_b_objective(model, near), v - 1e-9);
    const BandOne up{s.strategy.y2, s.strategy.y2, s.strategy.y1 + d};
    EXPECT_GE(level_b_objective(model, up), v - 1e-9);
  }
}

TEST(Optimize, ExampleTwoTypeOneThresholds) {
  const auto model = validate(fixtures::example_two());
  const BandSearch s = optimize_type_one(model);
  EXPECT_NEAR(s.strategy.y2, fixtures::kReportedBandTwo.y2, 0.02);
  EXPECT_NEAR(s.strategy.y3, fixtures::kReportedBandTwo.y3, 0.02);
  EXPECT_NEAR(s.strategy.y1, fixtures::kReportedBandTwo.y1, 0.02);
  EXPECT_GT(s.evaluations, 0);
}

TEST(Optimize, SearchDoesNotDependOnJobs) {
  const auto model = validate(fixtures::example_three());
  OptimizeOptions one, three;
  three.jobs = 3;
  const BandSearch a = optimize_type_one(model, one);
  const BandSearch b = optimize_type_one(model, three);
  EXPECT_EQ(a.strategy.y1, b.strategy.y1);
  EXPECT_EQ(a.strategy.y2, b.strategy.y2);
  EXPECT_EQ(a.strategy.y3, b.strategy.y3);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Optimize, ExampleThreeEscalatesToAVerifiedTypeTwo) {
  const auto model = validate(fixtures::example_three());
  const auto r = escalate(model, StrategyKind::Doshi, StrategyKind::TypeTwo);
  ASSERT_EQ(r.stages.size(), 3u);
  EXPECT_FALSE(r.stages[0].report.pass);
  EXPECT_FALSE(r.stages[1].report.pass);
  EXPECT_EQ(r.strategy.kind, StrategyKind::TypeTwo);
  EXPECT_TRUE(r.verified);
  ASSERT_TRUE(r.strategy.y4.has_value());
  EXPECT_GT(*r.strategy.y4, r.strategy.y1);
  EXPECT_LT(*r.strategy.y4, model->b);
  EXPECT_NEAR(r.objective, r.level_b.total(), 1e-12);
}

TEST(Optimize, UpperComponentMinimizesTheScore) {
  const auto model = validate(fixtures::example_three());
  const auto lower = fixtures::kReportedBandThree.lower();
  const BandSearch s = optimize_type_two(model, lower);
  ASSERT_TRUE(s.strategy.y4.has_value());
  const double best = upper_component_score(model, lower, *s.strategy.y4, 20);
  EXPECT_TRUE(std::isfinite(best));
  for (double y4 : {lower.y1 + 0.5, 6.5, 9.0}) {
    EXPECT_LE(best, upper_component_score(model, lower, y4, 20) + 1e-12) << y4;
  }
}

TEST(Optimize, EscalationStopsAtTheFirstVerifiedClass) {
  const auto model = validate(fixtures::example_one());
  const auto r = escalate(model, StrategyKind::Doshi, StrategyKind::TypeTwo);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.strategy.kind, StrategyKind::Doshi);
}
