#include <benchmark/benchmark.h>

#include "sispace/generators.hpp"
#include "sispace/localization.hpp"
#include "sispace/spectral.hpp"

using namespace sispace;

namespace {

const generators::PsiParams kPsi = generators::PsiParams::make(1, 2, 2, 4);

void BM_BuildPsiSpectrum(benchmark::State& state) {
  const auto grid = generators::auto_grid(kPsi);
  for (auto _ : state) benchmark::DoNotOptimize(generators::build_psi_spectrum(kPsi, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_BuildPsiSpectrum)->Unit(benchmark::kMillisecond);

void BM_ToTimeDomain(benchmark::State& state) {
  const auto grid = make_grid(static_cast<int>(state.range(0)), 64);
  const auto f = generators::build_sinc(grid);
  for (auto _ : state) benchmark::DoNotOptimize(to_time_domain(f));
  state.SetComplexityN(static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_ToTimeDomain)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

void BM_Periodization(benchmark::State& state) {
  const auto f = generators::build_spectrum(kPsi, generators::auto_grid(kPsi));
  for (auto _ : state) benchmark::DoNotOptimize(analysis::periodization(f));
}
BENCHMARK(BM_Periodization)->Unit(benchmark::kMillisecond);

void BM_InvarianceReport(benchmark::State& state) {
  const auto f = generators::build_spectrum(kPsi, generators::auto_grid(kPsi));
  for (auto _ : state) benchmark::DoNotOptimize(analysis::n_invariance_report(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_InvarianceReport)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PsiTimePoint(benchmark::State& state) {
  const generators::PsiTimeEvaluator eval(kPsi.with_depth(static_cast<int>(state.range(0))));
  double x = 0.123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(x));
    x += 1e-3;
  }
}
BENCHMARK(BM_PsiTimePoint)->DenseRange(4, 7);

void BM_DirichletRatio(benchmark::State& state) {
  const auto count = state.range(0);
  double theta = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generators::geometric_phase_sum(theta, count));
    theta += 1e-7;
  }
}
BENCHMARK(BM_DirichletRatio)->Arg(4)->Arg(1 << 20);

void BM_TimeProfile(benchmark::State& state) {
  const generators::GeneratorSpec spec = kPsi;
  const auto f = generators::build_spectrum(spec, make_grid(1024, 1024));
  for (auto _ : state) {
    benchmark::DoNotOptimize(localization::time_profile_for(spec, f, static_cast<double>(state.range(0))));
  }
}
BENCHMARK(BM_TimeProfile)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
