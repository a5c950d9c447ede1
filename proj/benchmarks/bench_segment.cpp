#include <benchmark/benchmark.h>

#include "graphpae/autodiff.hpp"
#include "graphpae/rng.hpp"

using namespace graphpae;

namespace {

struct SegmentInput {
  Tensor values;
  std::vector<std::uint32_t> segment;
  std::size_t segments;
};

SegmentInput make_input(std::size_t edges, std::size_t cols) {
  SegmentInput in{Tensor(edges, cols), std::vector<std::uint32_t>(edges), edges / 8};
  Rng rng(7);
  for (auto& v : in.values.data()) v = standard_normal(rng);
  for (std::size_t e = 0; e < edges; ++e) in.segment[e] = static_cast<std::uint32_t>(e / 8);
  return in;
}

template <Var (*Op)(Var, std::span<const std::uint32_t>, std::size_t)>
void run_segment(benchmark::State& state) {
  const auto in = make_input(static_cast<std::size_t>(state.range(0)), 64);
  ParameterStore params;
  params.add("x", in.values);
  for (auto _ : state) {
    Tape tape(params);
    Var out = Op(tape.param("x"), in.segment, in.segments);
    tape.backward(ad::sum(out));
    benchmark::DoNotOptimize(params.at("x").grad.data().data());
  }
}

}  // namespace

BENCHMARK(run_segment<ad::segment_sum>)->Name("BM_SegmentSum")->Arg(10000)->Arg(100000);
BENCHMARK(run_segment<ad::segment_softmax>)->Name("BM_SegmentSoftmax")->Arg(10000)->Arg(100000);
