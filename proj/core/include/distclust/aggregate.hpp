#pragma once

#include <cstdint>
#include <span>

#include "distclust/costs.hpp"

namespace distclust {

// Output of the ball-aggregation pass. Every input point is either carried by
// a summary entry (its weight counts it, assignment records which) or left in
// discarded. Weights are the exact carried counts, so
// total summary weight + |discarded| == |input|.
struct AggregationResult {
  WeightedPointSet summary;          // (Q', w'), entries keyed by original points
  std::vector<Point> discarded;      // points never inside a selected 4L-ball
  // original point id -> index into summary.points, one entry per carried point,
  // in input order. d(p, chosen) <= 4L for every pair.
  std::vector<std::pair<std::uint64_t, std::size_t>> assignment;
};

enum class AggregationPolicy {
  DensestFirst,   // pick the point whose 2L-ball over U is largest (ties: lowest index)
  FirstEligible,  // pick the lowest-index point whose 2L-ball exceeds y
};

// Repeatedly selects a point whose 2L-ball over the surviving set U holds more
// than y points, records the size of its 4L-ball as the entry weight, and
// removes that 4L-ball from U. Stops when every 2L-ball over U has at most y
// points. y may be fractional; ball sizes are cardinalities of U-members.
AggregationResult aggregate(std::span<const Point> Q, double L, double y, const Metric& m,
                            AggregationPolicy policy = AggregationPolicy::DensestFirst);

// Checks |summary| <= k + z_hat / y against a witness (k, z_hat)-center
// solution for Q of cost at most L. The witness is validated first: at most
// z_hat points of Q may lie farther than L from its centers; an invalid
// witness is an error, not a false return.
bool verify_qprime_bound(const AggregationResult& result, std::span<const Point> Q,
                         const ClusteringSolution& witness, double y, double L,
                         const Metric& m);

}  // namespace distclust
