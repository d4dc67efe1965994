#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fracphi/forest.hpp"
#include "fracphi/integrand.hpp"
#include "fracphi/integrator.hpp"
#include "fracphi/routing.hpp"

using namespace fracphi;

namespace {

PropagatorSpec spec(std::int64_t num, std::int64_t den, double kappa) {
  PropagatorSpec s;
  s.alpha = Alpha(num, den);
  s.kappa = kappa;
  return s;
}

}  // namespace

static void BM_BareIntegrand(benchmark::State& state) {
  const auto r = route_momenta(catalog::sunset());
  const auto ext = external_momenta(r, 1.0);
  const CompiledIntegrand f = compile_bare(r, spec(3, 4, 100.0), ext);
  std::vector<double> k{0.3, -1.7};
  for (auto _ : state) {
    k[0] += 1e-9;
    benchmark::DoNotOptimize(f(k));
  }
}
BENCHMARK(BM_BareIntegrand);

static void BM_RenormalizedIntegrand(benchmark::State& state) {
  const auto r = route_momenta(catalog::sunset());
  const auto ext = external_momenta(r, 1.0);
  const auto ri = build_renormalized_integrand(catalog::sunset(), Alpha(3, 4));
  const CompiledIntegrand f = compile_renormalized(ri, r, spec(3, 4, 100.0), ext);
  std::vector<double> k{0.3, -1.7};
  for (auto _ : state) {
    k[0] += 1e-9;
    benchmark::DoNotOptimize(f(k));
  }
}
BENCHMARK(BM_RenormalizedIntegrand);

static void BM_SunsetAdaptive(benchmark::State& state) {
  const auto r = route_momenta(catalog::sunset());
  const auto ext = external_momenta(r, 0.0);
  IntegrationOptions o;
  o.target_error = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_diagram(catalog::sunset(), spec(3, 4, static_cast<double>(state.range(0))), ext, false, o));
  }
}
BENCHMARK(BM_SunsetAdaptive)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_NutQuasiRandom(benchmark::State& state) {
  const auto r = route_momenta(catalog::nut());
  const auto ext = external_momenta(r, 0.0);
  IntegrationOptions o;
  o.target_error = 1e-2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_diagram(catalog::nut(), spec(5, 8, 100.0), ext, false, o));
  }
}
BENCHMARK(BM_NutQuasiRandom)->Unit(benchmark::kMillisecond);
