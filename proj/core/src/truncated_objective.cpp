#include "distclust/truncated_objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace distclust {
namespace {

double powed(double d, int ell) { return ell == 2 ? d * d : d; }

void check_ell(int ell) {
  if (ell != 1 && ell != 2)
    throw std::invalid_argument("truncated objective: ell must be 1 or 2");
}

std::vector<double> center_distances(const WeightedPointSet& P, std::span<const Point> C,
                                     const Metric& m) {
  if (C.empty()) throw std::invalid_argument("truncated objective: centers must be nonempty");
  std::vector<double> dist(P.points.size());
  for (std::size_t i = 0; i < P.points.size(); ++i)
    dist[i] = distance_to_set(P.points[i], C, m);
  return dist;
}

}  // namespace

double weighted_distance_statistic(const WeightedPointSet& P, std::span<const Point> C,
                                   double rank, const Metric& m) {
  const double total = P.total_weight();
  if (!(rank > 0.0) || rank > total)
    throw std::invalid_argument("weighted_distance_statistic: rank must lie in (0, total]");
  std::vector<double> dist = center_distances(P, C, m);
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  double cum = 0.0;
  for (std::size_t idx : order) {
    cum += P.weights[idx];
    if (cum >= rank) return dist[idx];
  }
  return dist[order.back()];  // rounding slack: rank at the top of the range
}

double cost_truncated_at(const WeightedPointSet& P, std::span<const Point> C, double z_prime,
                         int ell, double L, const Metric& m) {
  check_ell(ell);
  if (!(L >= 0.0)) throw std::invalid_argument("cost_truncated_at: L must be >= 0");
  if (!(z_prime >= 0.0) || z_prime >= P.total_weight())
    throw std::invalid_argument("cost_truncated_at: z' must lie in [0, total weight)");
  double sum = 0.0;
  for (std::size_t i = 0; i < P.points.size(); ++i) {
    const double d = std::min(distance_to_set(P.points[i], C, m), L);
    sum += P.weights[i] * powed(d, ell);
  }
  return sum - z_prime * powed(L, ell);
}

double cost_truncated_sup_real(const WeightedPointSet& P, std::span<const Point> C,
                               double z_prime, int ell, const Metric& m) {
  check_ell(ell);
  const double total = P.total_weight();
  if (!(z_prime >= 0.0) || z_prime >= total)
    throw std::invalid_argument("cost_truncated_sup_real: z' must lie in [0, total weight)");
  const double rank = total - std::floor(z_prime);
  const double L_bar = weighted_distance_statistic(P, C, rank, m);
  return cost_truncated_at(P, C, z_prime, ell, L_bar, m);
}

double cost_truncated_sup_grid(const WeightedPointSet& P, std::span<const Point> C,
                               double z_prime, int ell, std::span<const double> grid,
                               const Metric& m) {
  check_ell(ell);
  if (grid.empty()) throw std::invalid_argument("cost_truncated_sup_grid: grid must be nonempty");
  // One distance pass; every grid level reuses it.
  std::vector<double> dist = center_distances(P, C, m);
  if (!(z_prime >= 0.0) || z_prime >= P.total_weight())
    throw std::invalid_argument("cost_truncated_sup_grid: z' must lie in [0, total weight)");
  double best = -std::numeric_limits<double>::infinity();
  for (double L : grid) {
    double sum = 0.0;
    for (std::size_t i = 0; i < P.points.size(); ++i)
      sum += P.weights[i] * powed(std::min(dist[i], L), ell);
    best = std::max(best, sum - z_prime * powed(L, ell));
  }
  return best;
}

bool verify_grid_chain(const WeightedPointSet& P, std::span<const Point> C, double z_prime,
                       int ell, double eps, std::span<const double> grid, const Metric& m) {
  check_ell(ell);
  const double factor = std::pow(1.0 + eps, ell);
  const double inflated_z = factor * z_prime;
  if (inflated_z >= P.total_weight())
    throw std::invalid_argument("verify_grid_chain: (1+eps)^ell * z' must stay below the weight");
  const double lhs = cost_with_outliers(P, C, inflated_z, ell, m);
  const double rhs = factor * cost_truncated_sup_grid(P, C, z_prime, ell, grid, m);
  return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}

double TruncatedObjective::evaluate(std::span<const Point> centers) const {
  if (grid.size() != summaries.size())
    throw std::invalid_argument("TruncatedObjective: grid and summaries must align");
  if (grid.empty()) throw std::invalid_argument("TruncatedObjective: empty grid");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double L = grid[j];
    double sum = 0.0;
    for (std::size_t i = 0; i < summaries[j].points.size(); ++i) {
      const double d = std::min(distance_to_set(summaries[j].points[i], centers, base), L);
      sum += summaries[j].weights[i] * powed(d, ell);
    }
    best = std::max(best, sum / (1.0 - eps) - z_tilde * powed(L, ell));
  }
  return best;
}

}  // namespace distclust
