#include "distclust/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace distclust {

int power_for(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Median: return 1;
    case ObjectiveKind::Means: return 2;
    case ObjectiveKind::Center: break;
  }
  throw std::invalid_argument("power_for: center objective has no power");
}

std::vector<std::size_t> ball_indices(const WeightedPointSet& Q, const Point& p,
                                      double r, const Metric& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (m(Q.points[i], p) <= r) out.push_back(i);
  }
  return out;
}

WeightedPointSet ball(const WeightedPointSet& Q, const Point& p, double r, const Metric& m) {
  WeightedPointSet out;
  for (std::size_t i : ball_indices(Q, p, r, m)) out.add(Q.points[i], Q.weights[i]);
  return out;
}

namespace {

double pow_l(double d, int power) { return power == 1 ? d : d * d; }

// Sorted (distance, weight) pairs ascending by distance; ties keep input order.
std::vector<std::pair<double, double>> sorted_center_distances(
    const WeightedPointSet& P, std::span<const Point> centers, const Metric& m) {
  std::vector<std::pair<double, double>> dw(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    dw[i] = {distance_to_set(P.points[i], centers, m), P.weights[i]};
  std::stable_sort(dw.begin(), dw.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return dw;
}

}  // namespace

double cost_with_outliers(const WeightedPointSet& P, std::span<const Point> centers,
                          double z_prime, int power, const Metric& m) {
  if (power != 1 && power != 2)
    throw std::invalid_argument("cost_with_outliers: power must be 1 or 2");
  if (centers.empty()) throw std::invalid_argument("cost_with_outliers: no centers");
  const double W = P.total_weight();
  if (!(z_prime >= 0.0) || !(z_prime < W))
    throw std::invalid_argument("cost_with_outliers: need 0 <= z' < total weight");
  const auto dw = sorted_center_distances(P, centers, m);
  double keep = W - z_prime;
  double cost = 0.0;
  for (const auto& [d, w] : dw) {
    if (keep <= 0.0) break;
    const double take = std::min(w, keep);
    cost += take * pow_l(d, power);
    keep -= take;
  }
  return cost;
}

double cost_with_outliers(std::span<const Point> P, std::span<const Point> centers,
                          double z_prime, int power, const Metric& m) {
  return cost_with_outliers(unit_weighted(P), centers, z_prime, power, m);
}

double center_cost_with_outliers(const WeightedPointSet& P, std::span<const Point> centers,
                                 long long z, const Metric& m) {
  if (centers.empty()) throw std::invalid_argument("center_cost_with_outliers: no centers");
  const double W = P.total_weight();
  if (z < 0 || !(static_cast<double>(z) < W))
    throw std::invalid_argument("center_cost_with_outliers: need 0 <= z < total weight");
  const auto dw = sorted_center_distances(P, centers, m);
  const double rank = W - static_cast<double>(z);
  double cum = 0.0;
  for (const auto& [d, w] : dw) {
    cum += w;
    if (cum >= rank) return d;
  }
  return dw.empty() ? 0.0 : dw.back().first;  // unreachable when rank <= W
}

double center_cost_with_outliers(std::span<const Point> P, std::span<const Point> centers,
                                 long long z, const Metric& m) {
  return center_cost_with_outliers(unit_weighted(P), centers, z, m);
}

}  // namespace distclust
