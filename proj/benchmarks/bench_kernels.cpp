#include <benchmark/benchmark.h>

#include <random>

#include "ranksieve/prox.hpp"
#include "ranksieve/ssn.hpp"

using namespace ranksieve;

namespace {

Vector gaussian(std::mt19937_64& g, Index n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (auto& x : v) x = d(g);
  return v;
}

Matrix gaussian(std::mt19937_64& g, Index r, Index c) {
  std::normal_distribution<double> d;
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(g);
  return m;
}

void BM_ProxWilcoxon(benchmark::State& state) {
  std::mt19937_64 g(1);
  const Index n = state.range(0);
  const Vector y = gaussian(g, n);
  for (auto _ : state) benchmark::DoNotOptimize(prox_wilcoxon(y, 0.5));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ProxWilcoxon)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

void BM_WilcoxonLoss(benchmark::State& state) {
  std::mt19937_64 g(2);
  const Vector u = gaussian(g, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wilcoxon_loss(u));
}
BENCHMARK(BM_WilcoxonLoss)->RangeMultiplier(4)->Range(64, 65536);

void BM_HessianApply(benchmark::State& state) {
  std::mt19937_64 g(3);
  const Index n = state.range(0), p = state.range(1);
  const Matrix A = gaussian(g, n, p);
  const LossProx prox = loss_prox(Loss::WilcoxonRank, gaussian(g, n), 1e-3);
  Vector mask = Vector::Zero(p);
  mask.head(p / 2).setOnes();
  const HessianAction H(A, prox, L1JacobianMask{mask}, 1.0, 10.0);
  const Vector d = gaussian(g, p);
  for (auto _ : state) benchmark::DoNotOptimize(H(d));
}
BENCHMARK(BM_HessianApply)->Args({200, 25})->Args({200, 100})->Args({1000, 100})->Args({2000, 500});

}  // namespace
