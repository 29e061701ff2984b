#include <benchmark/benchmark.h>

#include "airyproc/brownian.hpp"
#include "airyproc/hermite.hpp"
#include "airyproc/sao.hpp"
#include "airyproc/tridiag.hpp"

namespace {

using namespace airyproc;

TridiagSym edge_matrix(std::size_t n) {
  RngStream s(1, 0);
  return edge_minor_matrix(sample_hermite({n, 2.0}, s), 0);
}

void BM_SturmCount(benchmark::State& state) {
  const auto t = edge_matrix(static_cast<std::size_t>(state.range(0)));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sturm_count(t, x));
    x += 1e-3;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SturmCount)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

void BM_LowestEigenvalues(benchmark::State& state) {
  const auto t = edge_matrix(static_cast<std::size_t>(state.range(0)));
  const double tol = default_tolerance(t);
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(t, 5, tol));
}
BENCHMARK(BM_LowestEigenvalues)->Arg(200)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);

void BM_LowestPairs(benchmark::State& state) {
  const auto t = edge_matrix(static_cast<std::size_t>(state.range(0)));
  const double tol = default_tolerance(t);
  for (auto _ : state) benchmark::DoNotOptimize(lowest_pairs(t, static_cast<std::size_t>(state.range(1)), tol));
}
BENCHMARK(BM_LowestPairs)->Args({2000, 1})->Args({2000, 5})->Args({20000, 5})->Unit(benchmark::kMicrosecond);

void BM_SaoSolve(benchmark::State& state) {
  RngStream s(2, 0);
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto path = sample_brownian_grid(s, h, static_cast<std::size_t>(8.0 / h));
  const SaoModel model{2.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_domain(model, path, 0, 8.0, 3));
}
BENCHMARK(BM_SaoSolve)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace
