#include <benchmark/benchmark.h>

#include <cmath>

#include "levysp/estimators.hpp"
#include "levysp/pdf_engine.hpp"
#include "levysp/sampler.hpp"

using namespace levysp;

namespace {

Observations noisy_path(const InnovationSpec& spec, std::size_t m, double noise_var) {
  return add_noise(simulate_path(spec, 1.0, m, 1), std::sqrt(noise_var), 1, 1);
}

void BM_TvDenoise(benchmark::State& state) {
  const auto obs = noisy_path(calibrated_spec(InnovationKind::VarianceGamma), state.range(0), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tv_denoise(obs, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TvDenoise)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_LogDenoise(benchmark::State& state) {
  const auto obs = noisy_path(calibrated_spec(InnovationKind::SymmetricAlphaStable), state.range(0), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(log_denoise(obs, 1.0, 1.0));
}
BENCHMARK(BM_LogDenoise)->Arg(256)->Arg(1024);

void BM_MmseDenoise(benchmark::State& state) {
  const auto spec = calibrated_spec(InnovationKind::SymmetricAlphaStable);
  const auto obs = noisy_path(spec, 256, 0.5);
  BpGridOptions grid;
  grid.num_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mmse_denoise(obs, spec, 1.0, grid));
}
BENCHMARK(BM_MmseDenoise)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

void BM_CharInversion(benchmark::State& state) {
  const auto spec = calibrated_spec(state.range(0) == 0 ? InnovationKind::SymmetricAlphaStable : InnovationKind::VarianceGamma);
  const auto grid = default_grid(spec, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(increment_pdf_char_inversion(spec, 1.0, grid));
}
BENCHMARK(BM_CharInversion)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SampleIncrements(benchmark::State& state) {
  const auto spec = [&] {
    switch (state.range(0)) {
      case 0: return calibrated_spec(InnovationKind::Gaussian);
      case 1: return InnovationSpec::compound_poisson(0.6, 1.0);
      case 2: return calibrated_spec(InnovationKind::SymmetricAlphaStable);
      default: return calibrated_spec(InnovationKind::VarianceGamma);
    }
  }();
  for (auto _ : state) benchmark::DoNotOptimize(sample_increments(spec, 1.0, 10000, 1));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SampleIncrements)->DenseRange(0, 3);

}  // namespace

BENCHMARK_MAIN();
