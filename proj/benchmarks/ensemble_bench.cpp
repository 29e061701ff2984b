#include <benchmark/benchmark.h>

#include "airyproc/hermite.hpp"
#include "airyproc/minor_process.hpp"

namespace {

using namespace airyproc;

void BM_SampleHermite(benchmark::State& state) {
  const BetaEnsembleSpec spec{static_cast<std::size_t>(state.range(0)), 2.0};
  std::uint64_t r = 0;
  for (auto _ : state) {
    RngStream s(3, r++);
    benchmark::DoNotOptimize(sample_hermite(spec, s));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleHermite)->Arg(2000)->Arg(100000)->Unit(benchmark::kMicrosecond);

// One replica of the n = 6000 trajectory at dt = 0.01, full matrix vs window 30.
void BM_Trajectory(benchmark::State& state) {
  const BetaEnsembleSpec spec{6000, 2.0};
  MinorOptions opts;
  opts.window = static_cast<double>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) {
    RngStream s(4, r++);
    benchmark::DoNotOptimize(compute_trajectory(spec, s, 5, 2.0, 0.01, opts));
  }
}
BENCHMARK(BM_Trajectory)->Arg(0)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
