#include "distclust/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "distclust/kzc.hpp"
#include "distclust/lgrid.hpp"
#include "distclust/seeding.hpp"

namespace distclust {
namespace {

double powed(double d, int power) { return power == 2 ? d * d : d; }

// t distinct indices uniform over [0, n), returned ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t t,
                                                    std::mt19937_64& rng) {
  t = std::min(t, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t j = 0; j < t; ++j) {
    const std::size_t span = n - j;
    std::size_t off = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(span));
    if (off >= span) off = span - 1;
    std::swap(idx[j], idx[j + off]);
  }
  idx.resize(t);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void validate_partition(const Partition& partition, int k, int z) {
  if (partition.empty()) throw std::invalid_argument("baseline: partition must be nonempty");
  if (k < 1) throw std::invalid_argument("baseline: k must be >= 1");
  if (z < 0) throw std::invalid_argument("baseline: z must be >= 0");
  std::size_t n = 0;
  for (const auto& part : partition) n += part.size();
  if (n == 0) throw std::invalid_argument("baseline: no points");
  if (static_cast<std::size_t>(z) >= n)
    throw std::invalid_argument("baseline: z must be smaller than the number of points");
}

// Smallest radius guess on a factor-2 ladder at which the greedy weighted
// (k,z)-center pass succeeds over the pooled summary. The top rung exceeds
// the largest pairwise distance, so the scan always terminates.
struct LadderPick {
  std::vector<Point> centers;
  double L = 0.0;
};

LadderPick kzc_ladder_pick(int k, long long z, const WeightedPointSet& pooled, const Metric& m) {
  const auto extremes = nonzero_distance_extremes(pooled.points);
  std::vector<double> ladder;
  if (!extremes.has_value) {
    ladder = {0.0};
  } else {
    ladder = build_lgrid(extremes.d_min, extremes.d_max, pooled.points.size(), 1.0);
  }
  for (double L : ladder) {
    KzcOutcome out = kzc(k, static_cast<double>(z), pooled, L, m);
    if (!out.no) return {std::move(out.centers), L};
  }
  throw std::logic_error("baseline radius scan exhausted its ladder; the top rung must succeed");
}

ClusteringSolution center_solution(const Partition& partition, std::vector<Point> centers,
                                   long long z) {
  const std::vector<Point> all = partition_union(partition);
  ClusteringSolution sol;
  sol.objective = center_cost_with_outliers(std::span<const Point>(all), centers, z,
                                            Metric::euclidean());
  sol.centers = std::move(centers);
  sol.outliers_allowed = static_cast<double>(z);
  sol.kind = ObjectiveKind::Center;
  return sol;
}

// One-round sampling protocols share this skeleton: machines ship a local
// summary, the coordinator pools and selects.
template <typename MakeSummary, typename Select>
BaselineRun sampled_baseline(const Partition& partition, int k, int z, std::uint64_t seed,
                             const BaselineConfig& config, MakeSummary make_summary,
                             Select select) {
  validate_partition(partition, k, z);
  const int m = static_cast<int>(partition.size());
  Network net(m, CostingRule{config.words_per_point}, seed);

  std::vector<Point> chosen;
  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round != 1) return;
    const auto& part = partition[static_cast<std::size_t>(ctx.machine) - 1];
    if (part.empty()) return;
    make_summary(part, ctx);
  });
  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round != 2) return;
    chosen = select(ctx);
    ctx.out.halt();
  });
  const auto result = net.run(2);

  BaselineRun run;
  run.solution = center_solution(partition, std::move(chosen), z);
  run.ledger = result.ledger;
  run.rounds_executed = result.rounds_executed;
  return run;
}

void send_uniform_sample(const std::vector<Point>& part, int k, int z, MachineCtx& ctx) {
  const std::size_t want =
      std::min(part.size(), static_cast<std::size_t>(k) + static_cast<std::size_t>(z));
  if (want == 0) return;
  std::vector<Point> sample;
  sample.reserve(want);
  for (std::size_t i : sample_without_replacement(part.size(), want, ctx.rng))
    sample.push_back(part[i]);
  ctx.out.send_to_coordinator(std::move(sample));
}

std::vector<Point> pooled_points(const CoordinatorCtx& ctx) {
  std::vector<Point> pooled;
  for (const Message& msg : ctx.inbox) {
    const auto& pts = std::get<std::vector<Point>>(msg.payload);
    pooled.insert(pooled.end(), pts.begin(), pts.end());
  }
  return pooled;
}

}  // namespace

// ---------------------------------------------------------------------------
// Weighted Lloyd engine
// ---------------------------------------------------------------------------

LloydRun weighted_kmeans_minus_minus(const WeightedPointSet& input, int k, double z_weight,
                                     int power, const Metric& assign_metric,
                                     const Metric* tie_break, const BaselineConfig& config,
                                     std::mt19937_64& rng) {
  if (k < 1) throw std::invalid_argument("weighted_kmeans_minus_minus: k must be >= 1");
  if (power != 1 && power != 2)
    throw std::invalid_argument("weighted_kmeans_minus_minus: power must be 1 or 2");
  if (config.max_iterations < 1)
    throw std::invalid_argument("weighted_kmeans_minus_minus: max_iterations must be >= 1");

  LloydRun run;
  const std::size_t n = input.points.size();
  if (n == 0) throw std::invalid_argument("weighted_kmeans_minus_minus: no points");
  const double total_weight = input.total_weight();
  if (!(z_weight >= 0.0) || z_weight >= total_weight)
    throw std::invalid_argument(
        "weighted_kmeans_minus_minus: z_weight must lie in [0, total weight)");
  const std::size_t dim = input.points[0].dim();

  // Weighted k-means++ seeding: first center by weight, later centers by
  // weight times current cost share. A zero total mass means every point is
  // already at cost zero, so fewer than k centers suffice.
  std::vector<Point> centers;
  {
    std::vector<double> mass = input.weights;
    std::size_t first = sample_index(mass, rng);
    if (first >= n) first = 0;
    centers.push_back(input.points[first]);
    std::vector<double> best_d(n);
    for (std::size_t i = 0; i < n; ++i) best_d[i] = assign_metric(input.points[i], centers[0]);
    while (centers.size() < static_cast<std::size_t>(k)) {
      for (std::size_t i = 0; i < n; ++i) mass[i] = input.weights[i] * powed(best_d[i], power);
      const std::size_t pick = sample_index(mass, rng);
      if (pick >= n) break;
      centers.push_back(input.points[pick]);
      for (std::size_t i = 0; i < n; ++i)
        best_d[i] = std::min(best_d[i], assign_metric(input.points[i], centers.back()));
    }
    for (std::size_t c = 0; c < centers.size(); ++c) centers[c].id = c;
  }

  run.assignment.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<double> included(n, 0.0);

  const auto assign_pass = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      double best_tie = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = assign_metric(input.points[i], centers[c]);
        if (d > best_dist) continue;
        const double t = tie_break ? (*tie_break)(input.points[i], centers[c]) : d;
        if (d < best_dist || t < best_tie) {
          best_dist = d;
          best_tie = t;
          best = static_cast<int>(c);
        }
      }
      run.assignment[i] = best;
      dist[i] = best_dist;
    }
    included = input.weights;
    if (z_weight > 0.0) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] > dist[b];
        return a < b;
      });
      double remaining = z_weight;
      for (std::size_t idx : order) {
        if (remaining <= 0.0) break;
        const double take = std::min(included[idx], remaining);
        included[idx] -= take;
        remaining -= take;
      }
    }
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) objective += included[i] * powed(dist[i], power);
    run.objective = objective;
  };

  const auto update_centroids = [&]() {
    const std::size_t kc = centers.size();
    std::vector<std::vector<double>> sums(kc, std::vector<double>(dim, 0.0));
    std::vector<double> weight_sum(kc, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (included[i] <= 0.0) continue;
      const auto c = static_cast<std::size_t>(run.assignment[i]);
      weight_sum[c] += included[i];
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += included[i] * input.points[i].coords[d];
    }
    std::vector<bool> claimed(n, false);
    for (std::size_t c = 0; c < kc; ++c) {
      if (weight_sum[c] > 0.0) {
        for (std::size_t d = 0; d < dim; ++d) centers[c].coords[d] = sums[c][d] / weight_sum[c];
        continue;
      }
      // Re-seed an emptied center at the farthest still-included point.
      std::size_t farthest = n;
      double farthest_dist = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (included[i] <= 0.0 || claimed[i]) continue;
        if (dist[i] > farthest_dist) {
          farthest_dist = dist[i];
          farthest = i;
        }
      }
      if (farthest < n) {
        centers[c].coords = input.points[farthest].coords;
        claimed[farthest] = true;
      }
    }
  };

  assign_pass();
  run.objective_trace.push_back(run.objective);
  run.iterations = 1;
  while (run.iterations < config.max_iterations) {
    update_centroids();
    assign_pass();
    run.objective_trace.push_back(run.objective);
    ++run.iterations;
    const double prev = run.objective_trace[run.objective_trace.size() - 2];
    if (prev - run.objective <= config.tolerance * std::max(prev, 1e-300)) break;
  }
  run.centers = std::move(centers);
  return run;
}

// ---------------------------------------------------------------------------
// Distributed sampling baselines
// ---------------------------------------------------------------------------

BaselineRun random_random_run(const Partition& partition, int k, int z, std::uint64_t seed,
                              const BaselineConfig& config) {
  return sampled_baseline(
      partition, k, z, seed, config,
      [&](const std::vector<Point>& part, MachineCtx& ctx) {
        send_uniform_sample(part, k, z, ctx);
      },
      [&](CoordinatorCtx& ctx) {
        std::vector<Point> pooled = pooled_points(ctx);
        if (pooled.size() < static_cast<std::size_t>(k))
          throw std::invalid_argument("random_random: pooled sample smaller than k");
        std::vector<Point> centers;
        for (std::size_t i : sample_without_replacement(pooled.size(),
                                                        static_cast<std::size_t>(k), ctx.rng))
          centers.push_back(pooled[i]);
        return centers;
      });
}

BaselineRun random_kzc_run(const Partition& partition, int k, int z, std::uint64_t seed,
                           const BaselineConfig& config) {
  return sampled_baseline(
      partition, k, z, seed, config,
      [&](const std::vector<Point>& part, MachineCtx& ctx) {
        send_uniform_sample(part, k, z, ctx);
      },
      [&](CoordinatorCtx& ctx) {
        std::vector<Point> pooled = pooled_points(ctx);
        if (pooled.size() < static_cast<std::size_t>(k))
          throw std::invalid_argument("random_kzc: pooled sample smaller than k");
        return kzc_ladder_pick(k, z, unit_weighted(pooled), Metric::euclidean()).centers;
      });
}

BaselineRun mkcwm_style_run(const Partition& partition, int k, int z, std::uint64_t seed,
                            const BaselineConfig& config) {
  const Metric euclid = Metric::euclidean();
  BaselineRun run = sampled_baseline(
      partition, k, z, seed, config,
      [&](const std::vector<Point>& part, MachineCtx& ctx) {
        const ClusteringSolution local = gonzalez_greedy(part, k + z, euclid);
        // Weight each summary center by its assignment population.
        std::vector<long long> population(local.centers.size(), 0);
        for (const Point& p : part) {
          std::size_t best = 0;
          double best_dist = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < local.centers.size(); ++c) {
            const double d = euclid(p, local.centers[c]);
            if (d < best_dist) {
              best_dist = d;
              best = c;
            }
          }
          ++population[best];
        }
        WeightedPointSet summary;
        for (std::size_t c = 0; c < local.centers.size(); ++c)
          summary.add(local.centers[c], static_cast<double>(population[c]));
        ctx.out.send_to_coordinator(std::move(summary));
      },
      [&](CoordinatorCtx& ctx) {
        WeightedPointSet pooled;
        for (const Message& msg : ctx.inbox) {
          const auto& summary = std::get<WeightedPointSet>(msg.payload);
          for (std::size_t i = 0; i < summary.points.size(); ++i)
            pooled.add(summary.points[i], summary.weights[i]);
        }
        if (pooled.points.size() < static_cast<std::size_t>(k))
          throw std::invalid_argument("mkcwm_style: pooled summary smaller than k");
        return kzc_ladder_pick(k, z, pooled, euclid).centers;
      });
  run.note =
      "stand-in: per-machine farthest-first summaries with population weights; "
      "matches the advertised communication shape, not the original steps";
  return run;
}

// ---------------------------------------------------------------------------
// Centralized baselines
// ---------------------------------------------------------------------------

namespace {
constexpr std::uint64_t kLloydStream = 0x1107d;

BaselineRun centralized_lloyd(const std::vector<Point>& points, int k, int z,
                              std::uint64_t seed, const BaselineConfig& config) {
  if (points.empty()) throw std::invalid_argument("lloyd: no points");
  if (z < 0 || static_cast<std::size_t>(z) >= points.size())
    throw std::invalid_argument("lloyd: z must lie in [0, n)");
  auto rng = rng_for_stream(seed, kLloydStream);
  const Metric euclid = Metric::euclidean();
  LloydRun lloyd = weighted_kmeans_minus_minus(unit_weighted(points), k,
                                               static_cast<double>(z), 2, euclid, nullptr,
                                               config, rng);
  BaselineRun run;
  run.solution.centers = std::move(lloyd.centers);
  run.solution.objective = lloyd.objective;
  run.solution.outliers_allowed = static_cast<double>(z);
  run.solution.kind = ObjectiveKind::Means;

  // Centralized algorithms see all the data; the ledger charges that upload.
  const CostingRule rule{config.words_per_point};
  std::int64_t words = 0;
  for (const Point& p : points) words += rule.words_for_point(p);
  run.ledger.record(1, true, words);
  run.rounds_executed = 2;
  run.note = "centralized; ledger charges a full data upload";
  return run;
}
}  // namespace

BaselineRun lloyd_kmeans_run(const std::vector<Point>& points, int k, std::uint64_t seed,
                             const BaselineConfig& config) {
  return centralized_lloyd(points, k, 0, seed, config);
}

BaselineRun kmeans_minus_minus_run(const std::vector<Point>& points, int k, int z,
                                   std::uint64_t seed, const BaselineConfig& config) {
  return centralized_lloyd(points, k, z, seed, config);
}

LloydRun kmeans_minus_minus_trace(const std::vector<Point>& points, int k, int z,
                                  std::uint64_t seed, const BaselineConfig& config) {
  if (points.empty()) throw std::invalid_argument("lloyd: no points");
  auto rng = rng_for_stream(seed, kLloydStream);
  return weighted_kmeans_minus_minus(unit_weighted(points), k, static_cast<double>(z), 2,
                                     Metric::euclidean(), nullptr, config, rng);
}

ClusteringSolution random_random(const Partition& partition, int k, int z, std::uint64_t seed,
                                 const BaselineConfig& config) {
  return random_random_run(partition, k, z, seed, config).solution;
}
ClusteringSolution random_kzc(const Partition& partition, int k, int z, std::uint64_t seed,
                              const BaselineConfig& config) {
  return random_kzc_run(partition, k, z, seed, config).solution;
}
ClusteringSolution mkcwm_style(const Partition& partition, int k, int z, std::uint64_t seed,
                               const BaselineConfig& config) {
  return mkcwm_style_run(partition, k, z, seed, config).solution;
}
ClusteringSolution lloyd_kmeans(const std::vector<Point>& points, int k, std::uint64_t seed,
                                const BaselineConfig& config) {
  return lloyd_kmeans_run(points, k, seed, config).solution;
}
ClusteringSolution kmeans_minus_minus(const std::vector<Point>& points, int k, int z,
                                      std::uint64_t seed, const BaselineConfig& config) {
  return kmeans_minus_minus_run(points, k, z, seed, config).solution;
}

}  // namespace distclust
