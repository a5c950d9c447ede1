#include <benchmark/benchmark.h>

#include "graphpae/model.hpp"
#include "graphpae/synth.hpp"

using namespace graphpae;

namespace {

ModelConfig bench_model(AttentionKind kind, std::size_t feature_dim) {
  ModelConfig m;
  m.encoder.attention = kind;
  m.feature_dim = feature_dim;
  return m;
}

void run_loss(benchmark::State& state, AttentionKind kind, bool backward) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t half = n / 2;
  const Graph g = make_sbm({half, n - half}, 0.1, 0.01, 3, FeatureMode::kSmooth);
  const ModelConfig model = bench_model(kind, g.feature_dim());
  ParameterStore params = init_model(model, 0);
  const PreparedGraph data = prepare_graph(g, 16, 0);
  Rng mask_rng(4);
  const auto plan = sample_plan(g, 0.25, CorruptionMode::kFeature, 0.01, mask_rng);
  for (auto _ : state) {
    Rng noise(5);
    Tape tape(params);
    const auto terms = pae_loss(tape, model, data, plan, {&noise, {}, {}});
    if (backward) tape.backward(terms.total);
    benchmark::DoNotOptimize(terms.total.value().item());
  }
  state.counters["edges"] = static_cast<double>(data.edges.num_edges());
}

}  // namespace

static void BM_LossForwardGat(benchmark::State& s) { run_loss(s, AttentionKind::kGat, false); }
static void BM_LossForwardBackwardGat(benchmark::State& s) { run_loss(s, AttentionKind::kGat, true); }
static void BM_LossForwardBackwardGatedGcn(benchmark::State& s) { run_loss(s, AttentionKind::kGatedGcn, true); }
BENCHMARK(BM_LossForwardGat)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossForwardBackwardGat)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossForwardBackwardGatedGcn)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
