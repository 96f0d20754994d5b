#include "distclust/median_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "distclust/baselines.hpp"
#include "distclust/lgrid.hpp"
#include "distclust/metric.hpp"
#include "distclust/reverse_greedy.hpp"
#include "distclust/seeding.hpp"
#include "distclust/truncated_objective.hpp"

namespace distclust {
namespace {

constexpr std::uint64_t kCoresetStreamBase = 1000;
constexpr std::uint64_t kSolverStreamBase = 0x501Fe;

void merge_shifted(CommLedger& into, const CommLedger& src, int offset) {
  for (int r = 1; r <= src.rounds(); ++r) {
    if (src.up_words(r) != 0) into.record(r + offset, true, src.up_words(r));
    if (src.down_words(r) != 0) into.record(r + offset, false, src.down_words(r));
  }
}

// Union of the coreset entries, coincident locations merged (weights summed
// across levels for ranking only). If the union exceeds `cap`, the
// heaviest-ranked locations are kept; first-seen order is preserved so
// solver tie-breaks stay deterministic.
std::vector<Point> candidate_pool(const std::vector<Coreset>& coresets, std::size_t cap) {
  std::vector<Point> locations;
  std::vector<double> rank;
  for (const Coreset& cs : coresets) {
    for (std::size_t i = 0; i < cs.entries.points.size(); ++i) {
      bool merged = false;
      for (std::size_t j = 0; j < locations.size(); ++j) {
        if (same_location(locations[j], cs.entries.points[i])) {
          rank[j] += cs.entries.weights[i];
          merged = true;
          break;
        }
      }
      if (!merged) {
        locations.push_back(cs.entries.points[i]);
        rank.push_back(cs.entries.weights[i]);
      }
    }
  }
  if (cap > 0 && locations.size() > cap) {
    std::vector<std::size_t> order(locations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (rank[a] != rank[b]) return rank[a] > rank[b];
      return a < b;
    });
    order.resize(cap);
    std::sort(order.begin(), order.end());
    std::vector<Point> kept;
    kept.reserve(cap);
    for (std::size_t idx : order) kept.push_back(locations[idx]);
    locations = std::move(kept);
  }
  for (std::size_t i = 0; i < locations.size(); ++i) locations[i].id = i;
  return locations;
}

}  // namespace

double MedianMeansConfig::z_tilde() const {
  return (1.0 + eps) * (1.0 + eps) * static_cast<double>(z) / (1.0 - eps);
}

double MedianMeansConfig::bicriteria_z() const {
  return std::pow(1.0 + eps, ell + 2) / (1.0 - eps) * static_cast<double>(z);
}

void MedianMeansConfig::validate(std::size_t n) const {
  if (k < 1) throw std::invalid_argument("median/means: k must be >= 1");
  if (z < 0) throw std::invalid_argument("median/means: z must be >= 0");
  if (ell != 1 && ell != 2) throw std::invalid_argument("median/means: ell must be 1 or 2");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("median/means: eps must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("median/means: delta must lie in (0,1)");
  if (n == 0) throw std::invalid_argument("median/means: no points");
  if (!(bicriteria_z() < static_cast<double>(n)))
    throw std::invalid_argument(
        "median/means: the bicriteria outlier count (1+eps)^(ell+2)/(1-eps)*z must stay below n");
  if (lloyd_iterations < 1 || solver_restarts < 1)
    throw std::invalid_argument("median/means: iteration counts must be >= 1");
}

MedianMeansReport solve_kz_median_means_distributed(const Partition& partition,
                                                    const MedianMeansConfig& config) {
  if (partition.empty()) throw std::invalid_argument("median/means: partition must be nonempty");
  const std::vector<Point> all = partition_union(partition);
  config.validate(all.size());
  if (!all.empty() && all[0].dim() == 0)
    throw std::invalid_argument("median/means: points need at least one coordinate");
  const std::size_t n = all.size();
  const int m = static_cast<int>(partition.size());

  MedianMeansReport report;
  report.machines = m;
  report.z_tilde = config.z_tilde();
  report.bicriteria_z = config.bicriteria_z();

  // Metadata exchange: machines report their distance extremes, the
  // coordinator replies with the merged pair so every party can derive the
  // clamp and the level grid. Charged two words each way per machine.
  const DistanceExtremes extremes = nonzero_distance_extremes(all);
  report.ledger.record(1, true, 2 * m);
  report.ledger.record(2, false, 2 * m);

  const Metric base = extremes.has_value
                          ? instance_clamped_metric(extremes.d_min, extremes.d_max, n, config.eps)
                          : Metric::euclidean();
  report.grid = build_lgrid(extremes, n, config.eps);

  // One coreset per level; the builds are independent, so their ledgers
  // overlay as one concurrent phase after the metadata rounds.
  CoresetConfig coreset_config;
  coreset_config.k = config.k;
  coreset_config.ell = config.ell;
  coreset_config.eps = config.eps;
  coreset_config.delta = config.delta;
  coreset_config.sizing = config.sizing;
  coreset_config.explicit_budget = config.explicit_budget;
  coreset_config.grid_size = report.grid.size();
  coreset_config.lloyd_iterations = config.lloyd_iterations;
  coreset_config.words_per_point = config.words_per_point;

  std::vector<Coreset> coresets;
  coresets.reserve(report.grid.size());
  int coreset_rounds = 0;
  for (std::size_t j = 0; j < report.grid.size(); ++j) {
    Coreset cs = build_coreset_distributed(partition, report.grid[j], base, coreset_config,
                                           mix_seed(config.seed, kCoresetStreamBase + j));
    merge_shifted(report.ledger, cs.ledger, 2);
    coreset_rounds = std::max(coreset_rounds, cs.rounds_executed);
    report.coreset_sizes.push_back(cs.entries.points.size());
    coresets.push_back(std::move(cs));
  }
  report.rounds_executed = 2 + coreset_rounds;

  TruncatedObjective objective;
  objective.grid = report.grid;
  objective.z_tilde = report.z_tilde;
  objective.ell = config.ell;
  objective.eps = config.eps;
  objective.base = base;
  for (const Coreset& cs : coresets) objective.summaries.push_back(cs.entries);

  // Coordinator-side solve over the summaries.
  std::vector<Point> centers;
  const std::vector<Point> pool = candidate_pool(coresets, config.pool_cap);
  if (pool.size() <= static_cast<std::size_t>(config.k)) {
    centers = pool;  // at most k distinct candidate locations: take them all
    report.solver_name = "pool";
  } else if (config.solver == MedianMeansSolver::ReverseGreedy) {
    MinMaxInstance instance;
    instance.pool = pool;
    instance.k = config.k;
    instance.ell = config.ell;
    for (std::size_t j = 0; j < coresets.size(); ++j) {
      MinMaxDataset ds;
      ds.points = coresets[j].entries;
      ds.metric = Metric::truncated(base, report.grid[j]);
      ds.scale = 1.0 / (1.0 - config.eps);
      ds.offset = -report.z_tilde * (config.ell == 2 ? report.grid[j] * report.grid[j]
                                                     : report.grid[j]);
      instance.datasets.push_back(std::move(ds));
    }
    centers = solve_with_budget_search(instance, config.budget_grid).centers;
    report.solver_name = "reverse-greedy";
  } else {
    // Multi-start outlier-robust Lloyd on the least-truncated summary,
    // scored under the level-wise worst-case objective.
    const std::size_t top = report.grid.size() - 1;
    const WeightedPointSet& summary = coresets[top].entries;
    const Metric assign = Metric::truncated(base, report.grid[top]);
    // The engine needs the excluded weight strictly below the total; the
    // conserved coreset weight can sit a hair under n, so clamp with margin.
    const double total = summary.total_weight();
    const double z_cap =
        std::max(0.0, std::min(report.z_tilde, total - std::max(1.0, 1e-6 * total)));
    BaselineConfig lloyd;
    lloyd.max_iterations = std::max(config.lloyd_iterations, 25);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.solver_restarts; ++r) {
      auto rng = rng_for_stream(config.seed, kSolverStreamBase + static_cast<std::uint64_t>(r));
      LloydRun run = weighted_kmeans_minus_minus(summary, config.k, z_cap, config.ell, assign,
                                                 &base, lloyd, rng);
      const double value = objective.evaluate(run.centers);
      if (value < best) {
        best = value;
        centers = run.centers;
      }
    }
    report.solver_name = "lloyd-outliers";
  }

  // Report the solution against the full data under the plain metric.
  const Metric euclid = Metric::euclidean();
  report.solution.centers = centers;
  report.solution.kind = config.ell == 1 ? ObjectiveKind::Median : ObjectiveKind::Means;
  report.solution.outliers_allowed = report.bicriteria_z;
  report.solution.objective = cost_with_outliers(std::span<const Point>(all), centers,
                                                 report.bicriteria_z, config.ell, euclid);
  report.objective_at_z = cost_with_outliers(std::span<const Point>(all), centers,
                                             static_cast<double>(config.z), config.ell, euclid);
  return report;
}

ClusteringSolution solve_kz_median_means(const Partition& partition, int k, long long z,
                                         int ell, double eps, double delta, std::uint64_t seed,
                                         MedianMeansSolver solver) {
  MedianMeansConfig config;
  config.k = k;
  config.z = z;
  config.ell = ell;
  config.eps = eps;
  config.delta = delta;
  config.seed = seed;
  config.solver = solver;
  return solve_kz_median_means_distributed(partition, config).solution;
}

nlohmann::json MedianMeansReport::to_json() const {
  nlohmann::json centers_json = nlohmann::json::array();
  for (const Point& c : solution.centers) centers_json.push_back(c.coords);
  return nlohmann::json{
      {"objective_kind", solution.kind == ObjectiveKind::Median ? "median" : "means"},
      {"centers", std::move(centers_json)},
      {"objective_at_bicriteria_z", solution.objective},
      {"objective_at_z", objective_at_z},
      {"bicriteria_z", bicriteria_z},
      {"z_tilde", z_tilde},
      {"grid_size", grid.size()},
      {"coreset_sizes", coreset_sizes},
      {"ledger", ledger.to_json()},
      {"rounds_executed", rounds_executed},
      {"solver", solver_name},
      {"machines", machines}};
}

}  // namespace distclust
