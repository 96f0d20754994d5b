#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace distclust {

// A point in R^D with an identity. The id distinguishes coincident copies in a
// multiset; two points may share coords but never share an id within one
// container. Equality of identity is id equality, equality of position is
// same_location().
struct Point {
  std::vector<double> coords;
  std::uint64_t id = 0;

  std::size_t dim() const { return coords.size(); }
};

inline bool same_location(const Point& a, const Point& b) {
  return a.coords == b.coords;
}

inline Point make_point(std::vector<double> coords, std::uint64_t id) {
  return Point{std::move(coords), id};
}

// Builds unit-spaced ids 0..n-1. Convenience for tests and ingestion.
inline std::vector<Point> make_points(const std::vector<std::vector<double>>& rows) {
  std::vector<Point> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.push_back(Point{rows[i], i});
  return out;
}

// Multiset of points with positive real weights. Stored SoA; points[i] carries
// weight weights[i]. Protocols that require integer weights assert
// has_integer_weights() on entry.
struct WeightedPointSet {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  void add(Point p, double w) {
    if (!(w > 0.0)) throw std::invalid_argument("WeightedPointSet: weight must be > 0");
    points.push_back(std::move(p));
    weights.push_back(w);
  }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  bool has_integer_weights() const {
    for (double w : weights) {
      if (w != static_cast<double>(static_cast<long long>(w))) return false;
    }
    return true;
  }
};

inline WeightedPointSet unit_weighted(std::span<const Point> pts) {
  WeightedPointSet s;
  s.points.assign(pts.begin(), pts.end());
  s.weights.assign(pts.size(), 1.0);
  return s;
}

inline WeightedPointSet unit_weighted(const std::vector<Point>& pts) {
  return unit_weighted(std::span<const Point>(pts));
}

}  // namespace distclust
