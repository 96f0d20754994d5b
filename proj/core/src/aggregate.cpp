#include "distclust/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace distclust {

AggregationResult aggregate(std::span<const Point> Q, double L, double y, const Metric& m,
                            AggregationPolicy policy) {
  if (!(L >= 0.0)) throw std::invalid_argument("aggregate: L must be >= 0");
  if (!(y >= 0.0)) throw std::invalid_argument("aggregate: y must be >= 0");

  const std::size_t n = Q.size();
  std::vector<char> alive(n, 1);
  // count[i] = |ball_U(Q[i], 2L)|, maintained incrementally as U shrinks.
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(Q[i], Q[j]) <= 2.0 * L) ++count[i];

  AggregationResult out;
  while (true) {
    std::size_t pick = n;
    if (policy == AggregationPolicy::DensestFirst) {
      int best = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<double>(count[i]) > y && count[i] > best) {
          best = count[i];
          pick = i;
        }
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<double>(count[i]) > y) {
          pick = i;
          break;
        }
      }
    }
    if (pick == n) break;

    std::vector<std::size_t> removed;
    for (std::size_t j = 0; j < n; ++j)
      if (alive[j] && m(Q[pick], Q[j]) <= 4.0 * L) removed.push_back(j);

    const std::size_t entry = out.summary.size();
    out.summary.add(Q[pick], static_cast<double>(removed.size()));
    for (std::size_t j : removed) {
      alive[j] = 0;
      out.assignment.emplace_back(Q[j].id, entry);
      for (std::size_t i = 0; i < n; ++i)
        if (m(Q[i], Q[j]) <= 2.0 * L) --count[i];
    }
  }

  for (std::size_t j = 0; j < n; ++j)
    if (alive[j]) out.discarded.push_back(Q[j]);
  return out;
}

bool verify_qprime_bound(const AggregationResult& result, std::span<const Point> Q,
                         const ClusteringSolution& witness, double y, double L,
                         const Metric& m) {
  if (witness.centers.empty())
    throw std::invalid_argument("verify_qprime_bound: witness has no centers");
  long long beyond = 0;
  for (const Point& q : Q)
    if (distance_to_set(q, witness.centers, m) > L) ++beyond;
  if (static_cast<double>(beyond) > witness.outliers_allowed)
    throw std::invalid_argument(
        "verify_qprime_bound: witness is not a valid solution of cost <= L");

  const double k = static_cast<double>(witness.centers.size());
  const double z_hat = witness.outliers_allowed;
  double bound;
  if (y > 0.0)
    bound = k + z_hat / y;
  else
    bound = z_hat == 0.0 ? k : std::numeric_limits<double>::infinity();
  return static_cast<double>(result.summary.size()) <= bound;
}

}  // namespace distclust
