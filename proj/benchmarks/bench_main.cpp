#include <benchmark/benchmark.h>

#include "demand/classify.hpp"
#include "demand/families.hpp"
#include "demand/mc.hpp"
#include "demand/pricing.hpp"
#include "demand/reliability.hpp"

namespace {

void BM_MrdClosedForm(benchmark::State& state) {
  const auto d = demand::families::pareto1(1.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand::mrd(d, 2.0));
  }
}
BENCHMARK(BM_MrdClosedForm);

void BM_MrdQuadrature(benchmark::State& state) {
  const auto d = demand::families::birnbaum_saunders(6.0, 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand::mrd(d, 10.0));
  }
}
BENCHMARK(BM_MrdQuadrature);

void BM_Curves(benchmark::State& state) {
  const auto d = demand::families::gamma(2.0, 1.0);
  demand::NumericConfig cfg;
  cfg.grid_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand::curves(d, cfg));
  }
}
BENCHMARK(BM_Curves)->Arg(64)->Arg(512);

void BM_Solve(benchmark::State& state) {
  const auto d = demand::families::uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand::solve(d));
  }
}
BENCHMARK(BM_Solve);

void BM_Classify(benchmark::State& state) {
  const auto d = demand::families::exponential(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(demand::classify(d));
  }
}
BENCHMARK(BM_Classify);

void BM_Sample(benchmark::State& state) {
  const auto d = demand::families::weibull(2.0, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.sample(7, n));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Sample)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
