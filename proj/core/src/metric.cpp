#include "distclust/metric.hpp"

#include <algorithm>
#include <cmath>

namespace distclust {

double Metric::operator()(const Point& a, const Point& b) const {
  if (a.dim() != b.dim())
    throw std::invalid_argument("distance: dimension mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    sq += d * d;
  }
  double d = std::sqrt(sq);
  if (floor_ && d != 0.0) d = std::min(std::max(d, *floor_), cap_);
  if (trunc_) d = std::min(d, *trunc_);
  return d;
}

double distance(const Point& a, const Point& b, const Metric& m) { return m(a, b); }

double distance_to_set(const Point& p, std::span<const Point> centers, const Metric& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& c : centers) best = std::min(best, m(p, c));
  return best;
}

DistanceExtremes nonzero_distance_extremes(std::span<const Point> pts) {
  const Metric eu = Metric::euclidean();
  DistanceExtremes ex;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = eu(pts[i], pts[j]);
      if (d == 0.0) continue;
      if (!ex.has_value) {
        ex.d_min = ex.d_max = d;
        ex.has_value = true;
      } else {
        ex.d_min = std::min(ex.d_min, d);
        ex.d_max = std::max(ex.d_max, d);
      }
    }
  }
  return ex;
}

}  // namespace distclust
