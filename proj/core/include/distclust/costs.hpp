#pragma once

#include <span>
#include <vector>

#include "distclust/metric.hpp"
#include "distclust/point.hpp"

namespace distclust {

enum class ObjectiveKind { Center, Median, Means };

// 1 for median, 2 for means. Center has no power; callers must not ask.
int power_for(ObjectiveKind kind);

struct ClusteringSolution {
  std::vector<Point> centers;
  double objective = 0.0;
  double outliers_allowed = 0.0;  // real z' >= 0
  ObjectiveKind kind = ObjectiveKind::Center;
};

// Members of Q within distance r of p, boundary inclusive (d <= r).
std::vector<std::size_t> ball_indices(const WeightedPointSet& Q, const Point& p,
                                      double r, const Metric& m);
WeightedPointSet ball(const WeightedPointSet& Q, const Point& p, double r, const Metric& m);

// Sum-based clustering cost with a real outlier budget z'. The cheapest
// z' units of weight (farthest points first) are excluded, fractionally at the
// boundary: sort by distance ascending, pay full weight until only z' weight
// remains, pay the fractional remainder on the boundary point, pay zero after.
// power is 1 (median) or 2 (means). Requires 0 <= z' < total weight.
double cost_with_outliers(const WeightedPointSet& P, std::span<const Point> centers,
                          double z_prime, int power, const Metric& m);
double cost_with_outliers(std::span<const Point> P, std::span<const Point> centers,
                          double z_prime, int power, const Metric& m);

// Radius after discarding the z farthest weight units: the (W - z)-th smallest
// distance in the multiset of center distances expanded by weights. z is a
// nonnegative integer with z < total weight.
double center_cost_with_outliers(const WeightedPointSet& P, std::span<const Point> centers,
                                 long long z, const Metric& m);
double center_cost_with_outliers(std::span<const Point> P, std::span<const Point> centers,
                                 long long z, const Metric& m);

}  // namespace distclust
