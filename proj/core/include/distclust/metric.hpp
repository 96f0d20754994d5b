#pragma once

#include <limits>
#include <optional>
#include <span>

#include "distclust/point.hpp"

namespace distclust {

// Distance functions used throughout. Three kinds compose:
//   euclidean            d(p,q) = ||p-q||_2
//   clamped(floor, cap)  0 if ||p-q|| == 0, else min(max(||p-q||, floor), cap);
//                        keeps zero distances at zero so coincident points stay free
//   truncated(base, L)   min(base(p,q), L)
// Truncating a truncated metric folds to the smaller cutoff. Clamping and
// truncation both preserve symmetry and the triangle inequality.
class Metric {
 public:
  static Metric euclidean() { return Metric{}; }

  static Metric clamped(double floor, double cap) {
    if (!(floor >= 0.0) || !(cap >= floor))
      throw std::invalid_argument("Metric::clamped: need 0 <= floor <= cap");
    Metric m;
    m.floor_ = floor;
    m.cap_ = cap;
    return m;
  }

  static Metric truncated(const Metric& base, double L) {
    if (!(L >= 0.0)) throw std::invalid_argument("Metric::truncated: need L >= 0");
    Metric m = base;
    m.trunc_ = m.trunc_ ? std::min(*m.trunc_, L) : L;
    return m;
  }

  double operator()(const Point& a, const Point& b) const;

  bool is_truncated() const { return trunc_.has_value(); }
  double truncation() const { return trunc_.value(); }
  bool is_clamped() const { return floor_.has_value(); }

 private:
  Metric() = default;
  std::optional<double> floor_;
  double cap_ = std::numeric_limits<double>::infinity();
  std::optional<double> trunc_;
};

double distance(const Point& a, const Point& b, const Metric& m);

// Distance from p to the nearest of centers; infinity for an empty center set.
double distance_to_set(const Point& p, std::span<const Point> centers, const Metric& m);

// Smallest and largest nonzero pairwise distance under the plain Euclidean
// metric. has_value() is false when every pair is coincident (or n < 2).
struct DistanceExtremes {
  double d_min = 0.0;
  double d_max = 0.0;
  bool has_value = false;
};

DistanceExtremes nonzero_distance_extremes(std::span<const Point> pts);

}  // namespace distclust
