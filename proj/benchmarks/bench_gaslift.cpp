#include <benchmark/benchmark.h>

#include "gaslift/exact.hpp"
#include "gaslift/lp_solver.hpp"
#include "gaslift/neural.hpp"
#include "gaslift/training.hpp"

namespace {

using namespace gaslift;

const ProblemParams kParams{0.72, 110.0, 8600.0};

void BM_EarlyFixedSolve(benchmark::State& state) {
  const FlowTable table = build_flow_table(kParams, default_grid());
  const RegionAssignment z{static_cast<int>(state.range(0)), 0};
  const LinearProgram lp = build_early_fixed_lp(kParams, table, z);
  for (auto _ : state) benchmark::DoNotOptimize(solve(lp).objective);
}
BENCHMARK(BM_EarlyFixedSolve)->DenseRange(0, 4)->Unit(benchmark::kMicrosecond);

void BM_BuildEarlyFixedLp(benchmark::State& state) {
  const FlowTable table = build_flow_table(kParams, default_grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_early_fixed_lp(kParams, table, {2, 1}).num_constraints());
  }
}
BENCHMARK(BM_BuildEarlyFixedLp)->Unit(benchmark::kMicrosecond);

void BM_ExactEnumeration(benchmark::State& state) {
  const FlowTable table = build_flow_table(kParams, default_grid());
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(kParams, table).best_objective);
}
BENCHMARK(BM_ExactEnumeration)->Unit(benchmark::kMicrosecond);

void BM_EarlyFixingInference(benchmark::State& state) {
  const nn::MlpModel model = nn::make_early_fixing_model(1);
  const std::vector<double> input = model_input(kParams);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nn::round_assignment(nn::predict(model, input)));
  }
}
BENCHMARK(BM_EarlyFixingInference);

void BM_SurrogateBackward(benchmark::State& state) {
  const nn::MlpModel model = nn::make_surrogate_model(1);
  const std::vector<double> input = surrogate_input(kParams, std::vector<double>(10, 0.2));
  const std::vector<double> upstream{1.0};
  for (auto _ : state) {
    const auto cache = nn::forward(model, input, true, 7);
    benchmark::DoNotOptimize(nn::backward(model, cache, upstream).input.data());
  }
}
BENCHMARK(BM_SurrogateBackward);

}  // namespace

BENCHMARK_MAIN();
