#include <benchmark/benchmark.h>

#include "graphpae/spectral.hpp"
#include "graphpae/synth.hpp"

using namespace graphpae;

static void BM_TopkEigenpairs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = make_random_graph(n, 8.0 / static_cast<double>(n), 1);
  const auto lap = normalized_laplacian(g);
  for (auto _ : state) benchmark::DoNotOptimize(topk_eigenpairs(lap, 16, 0));
}
BENCHMARK(BM_TopkEigenpairs)->Arg(200)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_RelativeDistances(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = make_random_graph(n, 8.0 / static_cast<double>(n), 2);
  const auto basis = topk_eigenpairs(normalized_laplacian(g), 16, 0);
  for (auto _ : state) benchmark::DoNotOptimize(relative_distances(basis, g));
}
BENCHMARK(BM_RelativeDistances)->Arg(1000)->Arg(4000)->Unit(benchmark::kMicrosecond);

static void BM_TopkEigenpairsMethod(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = make_random_graph(n, 8.0 / static_cast<double>(n), 1);
  const auto lap = normalized_laplacian(g);
  EigenOptions options;
  options.method = state.range(1) == 0 ? EigenMethod::kDense : EigenMethod::kLanczos;
  state.SetLabel(state.range(1) == 0 ? "dense" : "lanczos");
  for (auto _ : state) benchmark::DoNotOptimize(topk_eigenpairs(lap, 16, 0, options));
}
BENCHMARK(BM_TopkEigenpairsMethod)
    ->ArgsProduct({{200, 500, 1000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
