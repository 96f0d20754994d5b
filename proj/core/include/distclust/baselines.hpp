#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "distclust/costs.hpp"
#include "distclust/dist_kzc.hpp"
#include "distclust/metric.hpp"
#include "distclust/point.hpp"
#include "distclust/simnet.hpp"

namespace distclust {

// Shared parameters for the comparison algorithms.
struct BaselineConfig {
  int max_iterations = 50;     // Lloyd-style iteration cap
  double tolerance = 1e-9;     // relative objective improvement stop
  int words_per_point = 0;     // 0 = charge point dimension per point
};

// ---------------------------------------------------------------------------
// Weighted Lloyd engine with optional outlier exclusion.
//
// Seeding is weighted k-means++ under `assign_metric` raised to `power`;
// each iteration assigns every point to its nearest center under
// `assign_metric` (ties broken by `tie_break` when given, then by center
// index), fractionally excludes the `z_weight` units of weight farthest from
// their centers, and recomputes centers as plain weighted Euclidean means of
// the included weight. A center that ends an iteration with no included
// weight is re-seeded at the farthest included point.
// ---------------------------------------------------------------------------
struct LloydRun {
  std::vector<Point> centers;
  std::vector<int> assignment;          // per input point, index into centers
  double objective = 0.0;               // sum of included w * d^power
  std::vector<double> objective_trace;  // objective after each assignment pass
  int iterations = 0;                   // assignment passes performed
};

LloydRun weighted_kmeans_minus_minus(const WeightedPointSet& input, int k, double z_weight,
                                     int power, const Metric& assign_metric,
                                     const Metric* tie_break, const BaselineConfig& config,
                                     std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Distributed sampling baselines. Each returns the chosen centers together
// with a ledger of the words actually shipped through the simulated network.
// ---------------------------------------------------------------------------
struct BaselineRun {
  ClusteringSolution solution;
  CommLedger ledger;
  int rounds_executed = 0;
  std::string note;  // provenance remarks (e.g. stand-in status)
};

// Every machine sends min(k+z, n_i) uniform samples; the coordinator picks k
// of the pooled sample uniformly. Objective: k-center cost at z outliers
// over the full data.
BaselineRun random_random_run(const Partition& partition, int k, int z, std::uint64_t seed,
                              const BaselineConfig& config = {});

// Same sampling, but the coordinator picks centers by running the weighted
// (k,z)-center routine over the pooled sample on a geometric ladder of radius
// guesses, keeping the smallest successful guess.
BaselineRun random_kzc_run(const Partition& partition, int k, int z, std::uint64_t seed,
                           const BaselineConfig& config = {});

// Stand-in for a summarize-then-solve scheme known only by its communication
// shape: each machine ships k+z farthest-first centers weighted by the size
// of their assignment population; the coordinator runs the weighted
// (k,z)-center ladder over the pooled weighted summary.
BaselineRun mkcwm_style_run(const Partition& partition, int k, int z, std::uint64_t seed,
                            const BaselineConfig& config = {});

// Centralized Lloyd k-means (k-means++ seeding). Charged a full upload of
// the data in its ledger so communication comparisons stay honest.
BaselineRun lloyd_kmeans_run(const std::vector<Point>& points, int k, std::uint64_t seed,
                             const BaselineConfig& config = {});

// Centralized outlier-robust Lloyd: each iteration excludes the z points
// farthest from the current centers from both the centroid step and the
// objective. z = 0 reproduces lloyd_kmeans exactly.
BaselineRun kmeans_minus_minus_run(const std::vector<Point>& points, int k, int z,
                                   std::uint64_t seed, const BaselineConfig& config = {});

// Trajectory variant for convergence tests.
LloydRun kmeans_minus_minus_trace(const std::vector<Point>& points, int k, int z,
                                  std::uint64_t seed, const BaselineConfig& config = {});

// Solution-only conveniences.
ClusteringSolution random_random(const Partition& partition, int k, int z, std::uint64_t seed,
                                 const BaselineConfig& config = {});
ClusteringSolution random_kzc(const Partition& partition, int k, int z, std::uint64_t seed,
                              const BaselineConfig& config = {});
ClusteringSolution mkcwm_style(const Partition& partition, int k, int z, std::uint64_t seed,
                               const BaselineConfig& config = {});
ClusteringSolution lloyd_kmeans(const std::vector<Point>& points, int k, std::uint64_t seed,
                                const BaselineConfig& config = {});
ClusteringSolution kmeans_minus_minus(const std::vector<Point>& points, int k, int z,
                                      std::uint64_t seed, const BaselineConfig& config = {});

}  // namespace distclust
