#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distclust/costs.hpp"
#include "distclust/metric.hpp"
#include "distclust/point.hpp"

namespace distclust {

// One dataset of a min-max instance. Its contribution to the objective is
//   scale * sum_p w_p d^ell(p, C) + offset.
// The offset shifts the objective only; removal deltas cancel it.
struct MinMaxDataset {
  WeightedPointSet points;
  Metric metric = Metric::euclidean();
  double scale = 1.0;
  double offset = 0.0;
};

// Minimize over center sets C (|C| = k, C a subset of the pool) the maximum
// dataset cost. An empty pool field defaults to the union of the datasets'
// locations.
struct MinMaxInstance {
  std::vector<MinMaxDataset> datasets;
  std::vector<Point> pool;
  int k = 1;
  int ell = 2;
};

double minmax_objective(const MinMaxInstance& instance, std::span<const Point> centers);

// Reverse greedy at a fixed budget B. Starts from the full pool and removes
// one center per iteration: a removal is admissible when its cost increase
// stays within B/2 on every dataset; among admissible removals the one with
// the smallest weighted total increase goes (ties: lowest pool index), and
// dataset weights grow multiplicatively with the increase they suffered
// (kept in log domain, so the growth identity is exact). Stops after
// pool-size minus k removals.
// One removal: which pool entry went, the cost increase each dataset
// suffered, and every dataset's log-domain weight after the multiplicative
// update. The weight recurrence is log w' = log w + delta * log1p(1/B).
struct RemovalStep {
  std::size_t pool_index = 0;
  std::vector<double> deltas;       // per dataset
  std::vector<double> log_weights;  // per dataset, post-update
};

struct ReverseGreedyResult {
  bool infeasible = false;  // no admissible removal at some iteration
  std::vector<Point> centers;
  double objective = 0.0;  // minmax objective of `centers` (feasible case)
  int iterations = 0;
  std::vector<RemovalStep> steps;  // one per completed removal
};

ReverseGreedyResult reverse_greedy(const MinMaxInstance& instance, double budget);

// One budget's outcome inside the search grid.
struct BudgetProbe {
  double budget = 0.0;
  bool infeasible = false;
  double objective = 0.0;  // meaningful when feasible
};

// Runs reverse greedy over a geometric budget grid spanning the smallest
// positive single-removal cost to the best single-center cost (offset-free),
// plus one top rung large enough that every removal is admissible. Returns
// the feasible result with the smallest true min-max objective. When `probes`
// is given it receives one entry per budget tried, in grid order.
ClusteringSolution solve_with_budget_search(const MinMaxInstance& instance,
                                            std::size_t grid_points = 8,
                                            std::vector<BudgetProbe>* probes = nullptr);

}  // namespace distclust
