// Microbenchmarks for the hot paths: the covering pass, the aggregation
// primitive, one protocol guess end to end, a distributed coreset build, and
// the reverse-greedy min-max solver.
#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "distclust/aggregate.hpp"
#include "distclust/coreset.hpp"
#include "distclust/dataset.hpp"
#include "distclust/dist_kzc.hpp"
#include "distclust/kzc.hpp"
#include "distclust/metric.hpp"
#include "distclust/reverse_greedy.hpp"
#include "distclust/synth.hpp"

namespace {

using namespace distclust;

PlantedInstance planted(int clusters, int per_cluster, int outliers, std::uint64_t seed) {
  PlantedSpec spec;
  spec.clusters = clusters;
  spec.points_per_cluster = per_cluster;
  spec.outliers = outliers;
  spec.dim = 2;
  spec.separation = 30.0;
  spec.sigma = 1.0;
  spec.seed = seed;
  return make_planted(spec);
}

void BM_covering_pass(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const PlantedInstance inst = planted(4, n / 4, n / 50, 11);
  const WeightedPointSet Q = unit_weighted(inst.points);
  const Metric eu = Metric::euclidean();
  for (auto _ : state) {
    KzcOutcome out = kzc(4, static_cast<double>(n / 50), Q, 6.0, eu);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(n);
}

void BM_aggregate(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const PlantedInstance inst = planted(4, n / 4, n / 50, 12);
  const Metric eu = Metric::euclidean();
  for (auto _ : state) {
    AggregationResult out = aggregate(inst.points, 3.0, 8.0, eu);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(n);
}

void BM_protocol_single_guess(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const PlantedInstance inst = planted(4, n / 4, n / 50, 13);
  const Partition parts = partition_dataset(inst.points, 4, PartitionerKind::RoundRobin, 1);
  DistKzcConfig cfg;
  cfg.k = 4;
  cfg.z = n / 50;
  cfg.eps = 0.5;
  for (auto _ : state) {
    GuessOutcome out = dist_kzc_single(3.0, cfg, parts);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(n);
}

void BM_coreset_build(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const PlantedInstance inst = planted(4, n / 4, n / 50, 14);
  const Partition parts = partition_dataset(inst.points, 4, PartitionerKind::Random, 2);
  CoresetConfig cfg;
  cfg.k = 4;
  cfg.ell = 2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Coreset out = build_coreset_distributed(parts, 10.0, Metric::euclidean(), cfg, ++seed);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(n);
}

void BM_reverse_greedy(benchmark::State& state) {
  const auto pool_size = static_cast<int>(state.range(0));
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  MinMaxInstance instance;
  instance.k = 4;
  instance.ell = 2;
  for (int d = 0; d < 3; ++d) {
    MinMaxDataset ds;
    for (int i = 0; i < pool_size / 3; ++i)
      ds.points.add(Point{{u(rng), u(rng)}, static_cast<std::uint64_t>(d * 1000 + i)}, 1.0 + (i % 3));
    instance.datasets.push_back(std::move(ds));
  }
  for (auto _ : state) {
    ClusteringSolution out = solve_with_budget_search(instance, 4);
    benchmark::DoNotOptimize(out);
  }
  state.SetComplexityN(pool_size);
}

BENCHMARK(BM_covering_pass)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_aggregate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_protocol_single_guess)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_coreset_build)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();
BENCHMARK(BM_reverse_greedy)->Arg(60)->Arg(150)->Unit(benchmark::kMillisecond)->Complexity();

}  // namespace

BENCHMARK_MAIN();
