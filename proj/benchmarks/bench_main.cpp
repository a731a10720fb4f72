#include <benchmark/benchmark.h>

#include "multigiant/branching.hpp"
#include "multigiant/configuration.hpp"
#include "multigiant/degree_model.hpp"
#include "multigiant/exploration.hpp"
#include "multigiant/mean_matrix.hpp"

using namespace multigiant;

namespace {

Mass q(long a, long b) { return Mass::exact(Rational(a, b)); }

DegreeSpec bipartite() {
  return DegreeSpec(2, {{0, {0, 1}, q(1, 4)}, {0, {0, 3}, q(1, 4)}, {1, {2, 0}, q(1, 2)}});
}

DegreeSpec tripartite() {
  return DegreeSpec(3, {{0, {2, 1, 0}, q(1, 6)},
                        {0, {0, 0, 0}, q(1, 12)},
                        {0, {1, 0, 1}, q(1, 12)},
                        {1, {1, 1, 1}, q(1, 6)},
                        {1, {0, 2, 0}, q(1, 12)},
                        {1, {0, 0, 0}, q(1, 6)},
                        {2, {0, 1, 2}, q(1, 12)},
                        {2, {1, 1, 0}, q(1, 12)},
                        {2, {0, 0, 0}, q(1, 12)}});
}

void BM_SampleConfiguration(benchmark::State& state) {
  const auto seq = realize_sequence(bipartite(), state.range(0));
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_configuration(seq, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleConfiguration)->Arg(10'000)->Arg(100'000);

void BM_Exploration(benchmark::State& state) {
  const auto seq = realize_sequence(bipartite(), state.range(0));
  Rng rng(2);
  const auto g = sample_configuration(seq, rng);
  for (auto _ : state) benchmark::DoNotOptimize(explore_components(g, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Exploration)->Arg(10'000)->Arg(100'000);

void BM_UnionFind(benchmark::State& state) {
  const auto seq = realize_sequence(bipartite(), state.range(0));
  Rng rng(3);
  const auto g = sample_configuration(seq, rng);
  for (auto _ : state) benchmark::DoNotOptimize(union_find_components(g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_UnionFind)->Arg(10'000)->Arg(100'000);

void BM_PerronEigenpair(benchmark::State& state) {
  const auto m = build_mean_matrix(tripartite());
  for (auto _ : state) benchmark::DoNotOptimize(perron_eigenpair(m));
}
BENCHMARK(BM_PerronEigenpair);

void BM_ExtinctionFixedPoint(benchmark::State& state) {
  const auto law = build_offspring_law(tripartite());
  for (auto _ : state) benchmark::DoNotOptimize(extinction_fixed_point(law));
}
BENCHMARK(BM_ExtinctionFixedPoint);

void BM_RealizeSequence(benchmark::State& state) {
  const auto spec = tripartite();
  for (auto _ : state) benchmark::DoNotOptimize(realize_sequence(spec, state.range(0)));
}
BENCHMARK(BM_RealizeSequence)->Arg(1'000)->Arg(1'000'003);

} // namespace

BENCHMARK_MAIN();
