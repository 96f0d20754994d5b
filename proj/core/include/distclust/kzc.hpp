#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "distclust/costs.hpp"

namespace distclust {

// Outcome of the greedy covering pass: either a center list of at most k
// points, or a refusal ("no") certifying that no k-subset of the input covers
// all but z' weight at the guessed radius.
struct KzcOutcome {
  bool no = false;
  std::vector<Point> centers;       // meaningful when !no
  double uncovered_weight = 0.0;    // weight left outside all 4L' balls
};

// Greedy (k, z')-center pass at radius guess L'. Repeats k times: pick the
// point of Q whose 2L'-ball over the still-uncovered set U carries the most
// weight (ties: lowest index), then remove its 4L'-ball from U. Refuses when
// more than z' weight stays uncovered; the comparison is exact, z' may be any
// nonnegative real. Weights must be positive integers. When centers are
// returned, discarding floor(z') weight units leaves every remaining point
// within 4L' of a center.
KzcOutcome kzc(int k, double z_prime, const WeightedPointSet& Q, double L_prime,
               const Metric& m);

// Farthest-first traversal from the first point; ties pick the lowest index.
// No outliers. Objective is the covering radius of the chosen centers.
ClusteringSolution gonzalez_greedy(std::span<const Point> P, int k, const Metric& m);

// Exhaustive (k, z)-center optimum over k-subsets of the candidate pool
// (default: the distinct locations of P). Enumeration refuses instances where
// choose(|pool|, k) exceeds max_subsets. Ties resolve to the lexicographically
// first index subset.
ClusteringSolution brute_force_kzcenter(
    const WeightedPointSet& P, int k, long long z, const Metric& m,
    std::optional<std::vector<Point>> candidate_pool = std::nullopt,
    std::uint64_t max_subsets = 5'000'000);

}  // namespace distclust
