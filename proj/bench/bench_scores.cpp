// Serial vs OpenMP pairwise score matrix on synthetic windows.

#include <benchmark/benchmark.h>

#include "vsf/data_io.hpp"
#include "vsf/scores.hpp"

namespace {

struct Window {
  vsf::Dataset data;
  vsf::WindowView view;
};

Window make_window(std::size_t nodes, std::size_t length) {
  vsf::SyntheticSpec spec;
  spec.node_count = nodes;
  spec.length = length;
  spec.base = vsf::SineDrift{50.0, 2.0, 0.1, 20.0, 0.0, 0.0};
  for (std::size_t i = 1; i < nodes; i += 2) spec.links.push_back({i - 1, i, 1.5, 0.5, 0.05});
  Window w{vsf::generate_synthetic(spec), {}};
  for (const auto& t : w.data.traces) w.view.emplace_back(t.values);
  return w;
}

void BM_Serial(benchmark::State& state) {
  const auto w = make_window(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) benchmark::DoNotOptimize(vsf::pairwise_scores_serial(w.view, 4));
  state.SetComplexityN(state.range(0));
}

void BM_Parallel(benchmark::State& state) {
  const auto w = make_window(static_cast<std::size_t>(state.range(0)), 200);
  for (auto _ : state) benchmark::DoNotOptimize(vsf::pairwise_scores_parallel(w.view, 4));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_Serial)->RangeMultiplier(2)->Range(8, 128)->UseRealTime();
BENCHMARK(BM_Parallel)->RangeMultiplier(2)->Range(8, 128)->UseRealTime();

BENCHMARK_MAIN();
