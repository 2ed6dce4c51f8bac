// SPDX-License-Identifier: MIT
#include <benchmark/benchmark.h>

#include "bandctl/cost_one.hpp"
#include "bandctl/cost_two.hpp"
#include "bandctl/optimize.hpp"
#include "bandctl/scale.hpp"
#include "bandctl/simulate.hpp"
#include "bandctl/verify.hpp"
#include "support/fixtures.hpp"

using namespace bandctl;

namespace {

void BM_ScaleFunctions(benchmark::State& state) {
  const auto model = validate(fixtures::example_three());
  for (auto _ : state) benchmark::DoNotOptimize(build_scale(model, Phase::Low));
}
BENCHMARK(BM_ScaleFunctions);

void BM_TypeOneSurface(benchmark::State& state) {
  const auto model = validate(fixtures::example_two());
  for (auto _ : state) benchmark::DoNotOptimize(total_cost(model, fixtures::kReportedBandTwo));
}
BENCHMARK(BM_TypeOneSurface);

void BM_LevelObjective(benchmark::State& state) {
  const auto model = validate(fixtures::example_two());
  for (auto _ : state) benchmark::DoNotOptimize(level_b_objective(model, fixtures::kReportedBandTwo));
}
BENCHMARK(BM_LevelObjective);

void BM_TypeTwoSurface(benchmark::State& state) {
  const auto model = validate(fixtures::example_three());
  for (auto _ : state) {
    const CostSurface s = total_cost_two(model, fixtures::kReportedBandThree);
    benchmark::DoNotOptimize(s.total(Phase::High, 9.0));
  }
}
BENCHMARK(BM_TypeTwoSurface);

void BM_SurfacePoint(benchmark::State& state) {
  const auto model = validate(fixtures::example_three());
  const CostSurface s = total_cost_two(model, fixtures::kReportedBandThree);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.total(Phase::Low, x));
    x = x < 9.9 ? x + 0.01 : 0.0;
  }
}
BENCHMARK(BM_SurfacePoint);

void BM_Verify(benchmark::State& state) {
  const auto model = validate(fixtures::example_three());
  const CostSurface s = total_cost_two(model, fixtures::kReportedBandThree);
  VerifyOptions opt;
  opt.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_strategy(model, s, opt).pass);
}
BENCHMARK(BM_Verify)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SimulatePaths(benchmark::State& state) {
  const auto model = validate(fixtures::example_three());
  const auto st = SimStrategy::from(BandStrategy::from(fixtures::kReportedBandThree), model->b);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cost(model, st, 5.0, Phase::Low, n, 1).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePaths)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OptimizeDoshi(benchmark::State& state) {
  const auto model = validate(fixtures::example_one());
  for (auto _ : state) benchmark::DoNotOptimize(optimize_doshi(model).objective);
}
BENCHMARK(BM_OptimizeDoshi)->Unit(benchmark::kMillisecond);

void BM_OptimizeTypeOne(benchmark::State& state) {
  const auto model = validate(fixtures::example_two());
  for (auto _ : state) benchmark::DoNotOptimize(optimize_type_one(model).objective);
}
BENCHMARK(BM_OptimizeTypeOne)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
