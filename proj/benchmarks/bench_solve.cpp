#include <benchmark/benchmark.h>

#include "ranksieve/refsolver.hpp"
#include "ranksieve/sieve.hpp"
#include "ranksieve/synth.hpp"

using namespace ranksieve;

namespace {

// range(0) = n, range(1) = p; E2 design with the tuning-free lambda
void BM_SieveE2(benchmark::State& state) {
  const Instance inst = generate(experiment_spec(Experiment::E2, state.range(0), state.range(1), 1));
  for (auto _ : state) benchmark::DoNotOptimize(as_solve(inst.data, SolverConfig{}).val);
}
BENCHMARK(BM_SieveE2)->Args({100, 400})->Args({200, 1000})->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_FullSpaceE2(benchmark::State& state) {
  const Instance inst = generate(experiment_spec(Experiment::E2, state.range(0), state.range(1), 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(as_solve(inst.data, SolverConfig{}, SieveOptions{true, {}}).val);
}
BENCHMARK(BM_FullSpaceE2)->Args({100, 400})->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_SqrtLassoE5(benchmark::State& state) {
  const Instance inst = generate(experiment_spec(Experiment::E5, 100, 500, 1));
  for (auto _ : state) benchmark::DoNotOptimize(as_solve(inst.data, SolverConfig{}).val);
}
BENCHMARK(BM_SqrtLassoE5)->Unit(benchmark::kMillisecond);

void BM_SplittingE5(benchmark::State& state) {
  const Instance inst = generate(experiment_spec(Experiment::E5, 100, 500, 1));
  for (auto _ : state) benchmark::DoNotOptimize(splitting_solve(inst.data, 1e-8, 200000).val);
}
BENCHMARK(BM_SplittingE5)->Unit(benchmark::kMillisecond);

}  // namespace
