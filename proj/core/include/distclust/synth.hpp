#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "distclust/point.hpp"

namespace distclust {

// Standard normal deviate built from generator bits (Box-Muller), so draws
// do not depend on the standard library's distribution implementation.
double gaussian(std::mt19937_64& rng);

// `count` points uniform in the box obtained by scaling the bounding box of
// `data` about its center by `spread` per axis. Degenerate axes (zero
// extent) get a unit extent before scaling. Ids continue after `next_id`.
std::vector<Point> uniform_box_outliers(const std::vector<Point>& data, std::size_t count,
                                        double spread, std::uint64_t next_id,
                                        std::mt19937_64& rng);

// Well-separated Gaussian blobs plus uniform far outliers. Planted center j
// sits near (j * separation, 0, ..., 0) with a small jitter, so planted
// centers are pairwise at least about `separation` apart.
struct PlantedSpec {
  int clusters = 2;
  std::size_t points_per_cluster = 100;
  std::size_t outliers = 0;
  int dim = 2;
  double separation = 20.0;
  double sigma = 1.0;
  double outlier_spread = 5.0;
  std::uint64_t seed = 0;
};

struct PlantedInstance {
  std::vector<Point> points;  // inliers first, then outliers; ids 0..n-1
  std::vector<Point> true_centers;
  std::size_t inliers = 0;
  std::size_t outliers = 0;
};

PlantedInstance make_planted(const PlantedSpec& spec);

}  // namespace distclust
