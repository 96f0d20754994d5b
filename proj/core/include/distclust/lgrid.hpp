#pragma once

#include <vector>

#include "distclust/metric.hpp"

namespace distclust {

// Candidate truncation levels: {0} plus the powers of (1+eps) inside
// (eps*d_min / (2(1+eps)n), 2*d_max]. Sorted ascending. d_min and d_max are
// the nonzero distance extremes of the instance; when the instance has no
// nonzero distance the grid is just {0}.
std::vector<double> build_lgrid(double d_min, double d_max, std::size_t n, double eps);
std::vector<double> build_lgrid(const DistanceExtremes& extremes, std::size_t n, double eps);

// The instance metric used by the median/means pipeline: Euclidean with
// nonzero distances pushed up to eps*d_min/(2n) and capped at 2*d_max. Every
// nonzero distance then falls inside the grid's coverage.
Metric instance_clamped_metric(double d_min, double d_max, std::size_t n, double eps);

}  // namespace distclust
