#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "fracphi/canonical.hpp"
#include "fracphi/enumerate.hpp"
#include "fracphi/forest.hpp"
#include "fracphi/power_counting.hpp"

using namespace fracphi;

static void BM_Enumerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int E = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_diagrams(n, E));
}
BENCHMARK(BM_Enumerate)->Args({2, 2})->Args({3, 2})->Args({3, 4})->Args({4, 0})->Args({4, 2});

static void BM_EnumerateByContraction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_by_contraction(n, 2));
}
BENCHMARK(BM_EnumerateByContraction)->Arg(2)->Arg(3);

static void BM_Canonicalize(benchmark::State& state) {
  const auto ws = enumerate_diagrams(static_cast<int>(state.range(0)), 0);
  for (auto _ : state) {
    for (const auto& w : ws) benchmark::DoNotOptimize(canonicalize(w.diagram));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ws.size()));
}
BENCHMARK(BM_Canonicalize)->Arg(3)->Arg(4);

static void BM_Classify(benchmark::State& state) {
  const TopologyCatalog catalog(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(classify(Alpha(3, 4), catalog, catalog.max_order()));
}
BENCHMARK(BM_Classify)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_Forests(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_forests(catalog::sunset(), Alpha(3, 4)));
}
BENCHMARK(BM_Forests);
