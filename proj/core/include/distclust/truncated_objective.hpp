#pragma once

#include <span>
#include <vector>

#include "distclust/costs.hpp"
#include "distclust/metric.hpp"
#include "distclust/point.hpp"

namespace distclust {

// Smallest distance d such that at least `rank` weight of P lies within
// distance d of C. rank must lie in (0, total weight].
double weighted_distance_statistic(const WeightedPointSet& P, std::span<const Point> C,
                                   double rank, const Metric& m);

// The truncated objective at one level:
//   f(L) = sum_q w_q * min(d(q,C), L)^ell  -  z' * L^ell.
double cost_truncated_at(const WeightedPointSet& P, std::span<const Point> C, double z_prime,
                         int ell, double L, const Metric& m);

// f maximized over all levels: the maximum sits at the (W - floor(z'))-th
// smallest weighted center distance, where f equals the plain outlier cost
// (cost_with_outliers) exactly for integer weights.
double cost_truncated_sup_real(const WeightedPointSet& P, std::span<const Point> C,
                               double z_prime, int ell, const Metric& m);

// f maximized over a finite level grid only; never exceeds the real-mode
// value because the grid is a subset of the reals.
double cost_truncated_sup_grid(const WeightedPointSet& P, std::span<const Point> C,
                               double z_prime, int ell, std::span<const double> grid,
                               const Metric& m);

// Inequality linking the grid relaxation back to the plain objective:
//   cost at (1+eps)^ell * z' outliers  <=  (1+eps)^ell * grid-mode value at z'.
// Returns its truth (with a tiny floating-point slack); callers treat a
// false as a correctness violation.
bool verify_grid_chain(const WeightedPointSet& P, std::span<const Point> C, double z_prime,
                       int ell, double eps, std::span<const double> grid, const Metric& m);

// Coordinator-side objective for the distributed median/means pipeline: one
// weighted summary per truncation level, evaluated as
//   sup_L  (1/(1-eps)) * sum_q w_q d_L^ell(q,C)  -  z_tilde * L^ell.
struct TruncatedObjective {
  std::vector<double> grid;
  std::vector<WeightedPointSet> summaries;  // aligned with grid
  double z_tilde = 0.0;
  int ell = 2;
  double eps = 0.3;
  Metric base = Metric::euclidean();

  double evaluate(std::span<const Point> centers) const;
};

}  // namespace distclust
