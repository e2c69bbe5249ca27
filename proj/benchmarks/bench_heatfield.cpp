#include <benchmark/benchmark.h>

#include "heatfield/covariance.hpp"
#include "heatfield/samplers.hpp"

using namespace heatfield;

namespace {
const ModelParams P = ModelParams::make(0.7, 0.5, 1);

std::vector<double> lattice(int n, double step) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = i * step;
  return g;
}
}  // namespace

static void BM_TemporalCovariance(benchmark::State& st) {
  const double s = st.range(0) / 8.0;
  for (auto _ : st) benchmark::DoNotOptimize(temporal_covariance(P, 1.0, s));
}
BENCHMARK(BM_TemporalCovariance)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

static void BM_SpatialVariogram(benchmark::State& st) {
  const double h = std::ldexp(1.0, -static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spatial_variogram(P, 1.0, h));
}
BENCHMARK(BM_SpatialVariogram)->Arg(2)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_PinnedDensity(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(pinned_spectral_density(P, 3.0));
}
BENCHMARK(BM_PinnedDensity)->Unit(benchmark::kMicrosecond);

static void BM_FbmCirculant(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = lattice(n + 1, 1.0 / n);
  for (auto _ : st) benchmark::DoNotOptimize(sample_fbm(0.575, g, 16, 1).paths.data());
  st.SetItemsProcessed(st.iterations() * 16);
}
BENCHMARK(BM_FbmCirculant)->Arg(1 << 10)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

static void BM_PinnedCirculant(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto g = lattice(n + 1, 1.0 / n);
  for (auto _ : st)
    benchmark::DoNotOptimize(sample_pinned_U(P, g, 16, 1, SamplerMethod::CirculantEmbedding).paths.data());
  st.SetItemsProcessed(st.iterations() * 16);
}
BENCHMARK(BM_PinnedCirculant)->Arg(1 << 10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
