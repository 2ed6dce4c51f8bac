// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "bandctl/cost_one.hpp"
#include "bandctl/cost_two.hpp"
#include "bandctl/verify.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;

TEST(Operator, ConstantFunctionWithoutPenalty) {
  const auto model = validate(fixtures::flat_model(0.7));
  const auto w = [](double) { return 3.0; };
  for (Phase p : {Phase::High, Phase::Low}) {
    for (double x : {0.0, 1.3, 7.0}) {
      EXPECT_NEAR(operator_L(model, p, w, 0.0, x), -model->q * 3.0 + 0.7, 1e-12);
    }
  }
}

TEST(Operator, ConstantFunctionPicksUpPenaltyAndHolding) {
  const auto model = validate(fixtures::example_one());
  const auto w = [](double) { return 2.0; };
  for (double x : {0.0, 0.5, 4.0}) {
    const double expect = -model->q * 2.0 + model->lambda * penalty_tail(model.config(), x) + model->h1(x);
    EXPECT_NEAR(operator_L(model, Phase::High, w, 0.0, x), expect, 1e-10);
  }
}

TEST(Operator, LinearFunctionSlopeTerm) {
  const auto model = validate(fixtures::flat_model(0.0));
  const auto w = [](double x) { return x; };
  // sigma - (lambda+q)x + lambda int_0^x (x-a) dF(a) + 0, with exponential F of rate mu.
  const double mu = 1.5, lam = model->lambda, q = model->q;
  for (double x : {0.5, 2.0}) {
    const double conv = x - (1.0 - std::exp(-mu * x)) / mu;
    const double expect = model->sigma1 - (lam + q) * x + lam * conv;
    EXPECT_NEAR(operator_L(model, Phase::High, w, 1.0, x), expect, 1e-10) << x;
  }
}

TEST(Operator, ProbeSlopeSeesAKink) {
  const auto concave = [](double x) { return -std::abs(x - 1.0); };
  const SlopeProbe p = probe_slope(concave, 1.0);
  EXPECT_TRUE(p.kink);
  EXPECT_NEAR(p.left, 1.0, 1e-6);
  EXPECT_NEAR(p.right, -1.0, 1e-6);
  const auto convex = [](double x) { return std::abs(x - 1.0); };
  EXPECT_TRUE(std::isnan(probe_slope(convex, 1.0).supersolution_slope));
  const SlopeProbe smooth = probe_slope([](double x) { return x * x; }, 1.0);
  EXPECT_FALSE(smooth.kink);
  EXPECT_NEAR(smooth.central, 2.0, 1e-8);
}

TEST(Verify, FlatModelIsAnExactSolution) {
  const auto model = validate(fixtures::flat_model(0.3));
  const CostSurface s = total_cost(model, BandOne{2.0, 2.0, 6.0});
  EXPECT_NEAR(operator_L0(model, s, Selection::Optimal), 0.0, 1e-10);
  EXPECT_NEAR(operator_L0(model, s, Selection::Policy), 0.0, 1e-10);
  const auto r = verify_strategy(model, s);
  EXPECT_TRUE(r.pass);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    EXPECT_GE(r.residual_L1[i], -1e-8);
    EXPECT_GE(r.residual_L2[i], -1e-8);
  }
}

TEST(Verify, ReportShapesAgree) {
  const auto model = validate(fixtures::example_one());
  const auto r = verify_strategy(model, total_cost(model, fixtures::kReportedBandOne));
  const auto n = r.grid.size();
  EXPECT_GE(n, 400u);
  EXPECT_EQ(r.residual_L1.size(), n);
  EXPECT_EQ(r.residual_L2.size(), n);
  EXPECT_EQ(r.switch_slack_12.size(), n);
  EXPECT_EQ(r.switch_slack_21.size(), n);
  EXPECT_EQ(r.near_threshold.size(), n);
  EXPECT_TRUE(std::is_sorted(r.grid.begin(), r.grid.end()));
  EXPECT_GT(r.grid.front(), 0.0);
  EXPECT_LT(r.grid.back(), model->b);
  EXPECT_EQ(r.pass, r.failures.empty());
}

TEST(Verify, ExampleOneBestDoshiPassesAndReportedBandFails) {
  const auto model = validate(fixtures::example_one());
  EXPECT_TRUE(verify_strategy(model, total_cost(model, BandOne{0.0, 0.0, 3.3743})).pass);
  const auto reported = verify_strategy(model, total_cost(model, fixtures::kReportedBandOne));
  EXPECT_FALSE(reported.pass);
  EXPECT_LT(reported.worst_value, -reported.tolerance);
}

TEST(Verify, ExampleTwoAsPrintedFailsAtCapacity) {
  const auto model = validate(fixtures::example_two());
  const auto r = verify_strategy(model, total_cost(model, fixtures::kReportedBandTwo));
  EXPECT_FALSE(r.pass);
  EXPECT_LT(r.boundary.slack1, -r.tolerance);
}

TEST(Verify, ExampleThreeNeedsTheUpperComponent) {
  const auto model = validate(fixtures::example_three());
  const auto band = fixtures::kReportedBandThree;
  EXPECT_FALSE(verify_strategy(model, total_cost(model, band.lower())).pass);
  const auto r = verify_strategy(model, total_cost_two(model, band));
  EXPECT_TRUE(r.pass) << r.worst_kind << " " << r.worst_value << " at " << r.worst_x;
}

TEST(Verify, ReportDoesNotDependOnJobs) {
  const auto model = validate(fixtures::example_three());
  const CostSurface s = total_cost_two(model, fixtures::kReportedBandThree);
  VerifyOptions one, three;
  three.jobs = 3;
  const auto a = verify_strategy(model, s, one);
  const auto b = verify_strategy(model, s, three);
  ASSERT_EQ(a.grid, b.grid);
  // NaN marks a vacuous check; compare bit patterns so it counts as equal.
  EXPECT_EQ(0, std::memcmp(a.residual_L1.data(), b.residual_L1.data(), a.grid.size() * sizeof(double)));
  EXPECT_EQ(0, std::memcmp(a.residual_L2.data(), b.residual_L2.data(), a.grid.size() * sizeof(double)));
  EXPECT_EQ(a.worst_value, b.worst_value);
}
