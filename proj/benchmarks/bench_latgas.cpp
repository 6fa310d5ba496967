#include <benchmark/benchmark.h>


#include "latgas/exact.hpp"
#include "latgas/hypergraph.hpp"
#include "latgas/ks.hpp"
#include "latgas/recursion.hpp"

namespace {

using namespace latgas;

// Nearest-neighbour ring with a weak repulsion and a few triple bonds.
InteractionModel ring(unsigned n, double z) {
  InteractionModel m(n);
  for (Site x = 0; x < n; ++x) {
    m.set_activity(x, {z, 0.02});
    m.set_w(SiteSet::of({x, (x + 1) % n}), {0.8, 0.05});
    if (x + 2 < n) m.set_w(SiteSet::of({x, x + 1, x + 2}), {1.1, -0.03});
  }
  return m;
}

void BM_PartitionFunction(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const InteractionModel m = ring(n, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(exact::partition_function(m, m.lattice()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PartitionFunction)->DenseRange(8, 18, 2);

void BM_PartitionFunctionThreads(benchmark::State& state) {
  const InteractionModel m = ring(18, 0.1);
  const ExecOptions exec{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(exact::partition_function(m, m.lattice(), {}, exec));
}
BENCHMARK(BM_PartitionFunctionThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime();

void BM_RecursiveZhat(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const InteractionModel m = ring(n, 0.1);
  const SiteSet volume = m.lattice().without(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(recursion::recursive_effective_activity(m, 0, volume, {}));
  }
}
BENCHMARK(BM_RecursiveZhat)->DenseRange(4, 7, 1);

void BM_PicardSolve(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const InteractionModel m = ring(n, 0.1);
  const SiteSet volume = m.lattice().without(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ks::picard_solve(m, volume, m.lattice()).iterations);
  }
}
BENCHMARK(BM_PicardSolve)->DenseRange(4, 8, 2);

void BM_GammaCover(benchmark::State& state) {
  const InteractionModel m = ring(10, 0.1);
  const SiteSet shift = SiteSet::first(static_cast<unsigned>(state.range(0)) + 1).without(0);
  for (auto _ : state) benchmark::DoNotOptimize(ks::gamma_cover(m, {0, shift, {}}));
}
BENCHMARK(BM_GammaCover)->DenseRange(2, 8, 2);

void BM_PolydiscScan(benchmark::State& state) {
  hypergraph::Hypergraph h(10);
  for (Site x = 0; x + 1 < 10; ++x) h.add_edge(SiteSet::of({x, x + 1}));
  hypergraph::ScanOptions options;
  options.rule = hypergraph::RadiusRule::kBencsBuys;
  options.samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hypergraph::polydisc_scan(h, options).min_abs_z);
}
BENCHMARK(BM_PolydiscScan)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
