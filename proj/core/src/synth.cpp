#include "distclust/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "distclust/seeding.hpp"

namespace distclust {

double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit_uniform(rng);  // (0, 1]: keeps the log finite
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Point> uniform_box_outliers(const std::vector<Point>& data, std::size_t count,
                                        double spread, std::uint64_t next_id,
                                        std::mt19937_64& rng) {
  if (count == 0) return {};
  if (data.empty()) throw std::invalid_argument("outliers: data must be nonempty");
  if (!(spread > 0.0)) throw std::invalid_argument("outliers: spread must be positive");
  const std::size_t dim = data[0].dim();
  std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
  for (const Point& p : data) {
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], p.coords[d]);
      hi[d] = std::max(hi[d], p.coords[d]);
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    const double center = (lo[d] + hi[d]) / 2.0;
    double half = (hi[d] - lo[d]) / 2.0;
    if (half <= 0.0) half = 0.5;
    lo[d] = center - spread * half;
    hi[d] = center + spread * half;
  }
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Point p;
    p.coords.resize(dim);
    for (std::size_t d = 0; d < dim; ++d)
      p.coords[d] = lo[d] + unit_uniform(rng) * (hi[d] - lo[d]);
    p.id = next_id + i;
    out.push_back(std::move(p));
  }
  return out;
}

PlantedInstance make_planted(const PlantedSpec& spec) {
  if (spec.clusters < 1) throw std::invalid_argument("planted: clusters must be >= 1");
  if (spec.dim < 1) throw std::invalid_argument("planted: dim must be >= 1");
  if (spec.points_per_cluster == 0)
    throw std::invalid_argument("planted: points_per_cluster must be >= 1");
  if (!(spec.sigma >= 0.0) || !(spec.separation > 0.0))
    throw std::invalid_argument("planted: separation must be positive, sigma nonnegative");

  auto rng = rng_for_stream(spec.seed, 0x91a27);
  PlantedInstance inst;
  const auto dim = static_cast<std::size_t>(spec.dim);

  for (int j = 0; j < spec.clusters; ++j) {
    Point center;
    center.coords.assign(dim, 0.0);
    center.coords[0] = static_cast<double>(j) * spec.separation;
    for (std::size_t d = 0; d < dim; ++d)
      center.coords[d] += (unit_uniform(rng) - 0.5) * spec.separation / 10.0;
    center.id = static_cast<std::uint64_t>(j);
    inst.true_centers.push_back(std::move(center));
  }

  for (int j = 0; j < spec.clusters; ++j) {
    for (std::size_t i = 0; i < spec.points_per_cluster; ++i) {
      Point p;
      p.coords.resize(dim);
      for (std::size_t d = 0; d < dim; ++d)
        p.coords[d] = inst.true_centers[static_cast<std::size_t>(j)].coords[d] +
                      spec.sigma * gaussian(rng);
      p.id = inst.points.size();
      inst.points.push_back(std::move(p));
    }
  }
  inst.inliers = inst.points.size();

  std::vector<Point> outliers = uniform_box_outliers(inst.points, spec.outliers,
                                                     spec.outlier_spread, inst.points.size(), rng);
  inst.outliers = outliers.size();
  inst.points.insert(inst.points.end(), outliers.begin(), outliers.end());
  return inst;
}

}  // namespace distclust
