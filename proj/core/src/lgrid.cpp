#include "distclust/lgrid.hpp"

#include <cmath>
#include <stdexcept>

namespace distclust {

std::vector<double> build_lgrid(double d_min, double d_max, std::size_t n, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_lgrid: eps must be > 0");
  if (!(d_min > 0.0) || !(d_max >= d_min))
    throw std::invalid_argument("build_lgrid: need 0 < d_min <= d_max");
  if (n < 1) throw std::invalid_argument("build_lgrid: n must be >= 1");

  const double base = 1.0 + eps;
  const double lower = eps * d_min / (2.0 * base * static_cast<double>(n));  // exclusive
  const double upper = 2.0 * d_max;                                          // inclusive

  long long lo = static_cast<long long>(std::ceil(std::log(lower) / std::log(base)));
  while (std::pow(base, lo) <= lower) ++lo;
  while (std::pow(base, lo - 1) > lower) --lo;
  long long hi = static_cast<long long>(std::floor(std::log(upper) / std::log(base)));
  while (std::pow(base, hi) > upper) --hi;
  while (std::pow(base, hi + 1) <= upper) ++hi;

  std::vector<double> grid{0.0};
  for (long long t = lo; t <= hi; ++t) grid.push_back(std::pow(base, t));
  return grid;
}

std::vector<double> build_lgrid(const DistanceExtremes& extremes, std::size_t n, double eps) {
  if (!extremes.has_value) return {0.0};
  return build_lgrid(extremes.d_min, extremes.d_max, n, eps);
}

Metric instance_clamped_metric(double d_min, double d_max, std::size_t n, double eps) {
  if (!(d_min > 0.0) || !(d_max >= d_min))
    throw std::invalid_argument("instance_clamped_metric: need 0 < d_min <= d_max");
  return Metric::clamped(eps * d_min / (2.0 * static_cast<double>(n)), 2.0 * d_max);
}

}  // namespace distclust
