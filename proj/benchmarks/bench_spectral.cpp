#include <benchmark/benchmark.h>

#include <vector>

#include "fracphi/spectral.hpp"

using namespace fracphi;

static void BM_SamplePath(benchmark::State& state) {
  const SpectralSampler sampler(1.0, static_cast<double>(state.range(0)), 1);
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.1 * i);
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(index++, times));
}
BENCHMARK(BM_SamplePath)->Arg(20)->Arg(50)->Arg(200);

static void BM_Kernel(benchmark::State& state) {
  double tau = 0.0;
  for (auto _ : state) {
    tau += 1e-6;
    benchmark::DoNotOptimize(band_limited_kernel(tau, 1.0, 50.0, 0.6));
  }
}
BENCHMARK(BM_Kernel);
