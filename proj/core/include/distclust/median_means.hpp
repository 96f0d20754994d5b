#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "distclust/coreset.hpp"
#include "distclust/costs.hpp"
#include "distclust/dist_kzc.hpp"
#include "distclust/simnet.hpp"

namespace distclust {

enum class MedianMeansSolver { ReverseGreedy, LloydOutliers };

struct MedianMeansConfig {
  int k = 1;
  long long z = 0;
  int ell = 2;  // 1 for median, 2 for means
  double eps = 0.3;
  double delta = 0.1;
  MedianMeansSolver solver = MedianMeansSolver::ReverseGreedy;
  std::uint64_t seed = 0;
  int words_per_point = 0;

  CoresetConfig::Sizing sizing = CoresetConfig::Sizing::Heuristic;
  std::size_t explicit_budget = 0;   // CoresetConfig::Sizing::Explicit
  int lloyd_iterations = 10;         // machine-side local clustering
  int solver_restarts = 5;           // LloydOutliers multi-start count
  std::size_t pool_cap = 512;        // reverse-greedy candidate pool cap
  std::size_t budget_grid = 8;       // reverse-greedy budget search rungs

  // Outlier budgets derived from z: the solver criterion uses z_tilde, the
  // reported solution uses the bicriteria count.
  double z_tilde() const;       // (1+eps)^2 * z / (1-eps)
  double bicriteria_z() const;  // (1+eps)^(ell+2) / (1-eps) * z
  void validate(std::size_t n) const;
};

struct MedianMeansReport {
  ClusteringSolution solution;  // objective at the bicriteria outlier count
  double objective_at_z = 0.0;  // same centers, plain z outliers
  double bicriteria_z = 0.0;
  double z_tilde = 0.0;
  std::vector<double> grid;                 // truncation levels used
  std::vector<std::size_t> coreset_sizes;   // entries per level
  CommLedger ledger;                        // metadata phase + concurrent builds
  int rounds_executed = 0;
  std::string solver_name;
  int machines = 0;

  nlohmann::json to_json() const;
};

// Distributed (k,z)-median/means with outliers: clamp the metric, build the
// truncation-level grid from the global distance extremes (metadata
// exchange), build one coreset per level concurrently, then minimize the
// level-wise worst case
//   (1/(1-eps)) * sum_q w_q d_L^ell(q, C) - z_tilde * L^ell
// over the coreset summaries with the configured solver. The returned
// objective is measured on the full data under the plain metric at the
// bicriteria outlier count.
MedianMeansReport solve_kz_median_means_distributed(const Partition& partition,
                                                    const MedianMeansConfig& config);

ClusteringSolution solve_kz_median_means(const Partition& partition, int k, long long z,
                                         int ell, double eps, double delta, std::uint64_t seed,
                                         MedianMeansSolver solver);

}  // namespace distclust
