#include <benchmark/benchmark.h>

#include "chebdisc/chebtransform.hpp"
#include "chebdisc/construct.hpp"
#include "chebdisc/indexset.hpp"
#include "chebdisc/lattice.hpp"
#include "chebdisc/rng.hpp"

using namespace chebdisc;

namespace {

const IndexSet& dhc6(int n) {
  static const IndexSet sets[] = {make_dyadic_hyperbolic_cross(6, 2), make_dyadic_hyperbolic_cross(6, 4),
                                  make_dyadic_hyperbolic_cross(6, 6)};
  return sets[n / 2 - 1];
}

Rank1Lattice random_lattice(std::size_t d, std::uint64_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::int64_t> z(d);
  for (auto& zi : z) zi = static_cast<std::int64_t>(uniform_below(rng, m));
  return Rank1Lattice(std::move(z), m);
}

void BM_DetermineJ(benchmark::State& state) {
  const IndexSet& set = dhc6(static_cast<int>(state.range(0)));
  const MirrorTable table(set);
  const auto lattice = random_lattice(set.dim(), size_for(set), 7);
  for (auto _ : state) benchmark::DoNotOptimize(table.covered(lattice, AliasRule::unique));
  state.counters["mirror"] = static_cast<double>(table.mirror_size());
}
BENCHMARK(BM_DetermineJ)->Arg(2)->Arg(4)->Arg(6);

void BM_FastEvaluate(benchmark::State& state) {
  const IndexSet& set = dhc6(static_cast<int>(state.range(0)));
  StrategyParams params;
  params.seed = 3;
  const auto disc = construct_halving(set, params);
  const ChebTransform transform(disc);
  ChebCoefficients c{std::vector<double>(set.size(), 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(transform.evaluate(c));
  state.counters["samples"] = static_cast<double>(transform.rows());
}
BENCHMARK(BM_FastEvaluate)->Arg(2)->Arg(4)->Arg(6);

void BM_ConstructHalving(benchmark::State& state) {
  const IndexSet& set = dhc6(static_cast<int>(state.range(0)));
  StrategyParams params;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    params.seed = ++seed;
    benchmark::DoNotOptimize(construct_halving(set, params));
  }
}
BENCHMARK(BM_ConstructHalving)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
