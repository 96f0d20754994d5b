#include "distclust/reverse_greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace distclust {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double powed(double d, int ell) { return ell == 2 ? d * d : d; }

void validate(const MinMaxInstance& instance) {
  if (instance.datasets.empty())
    throw std::invalid_argument("minmax: at least one dataset required");
  if (instance.k < 1) throw std::invalid_argument("minmax: k must be >= 1");
  if (instance.ell != 1 && instance.ell != 2)
    throw std::invalid_argument("minmax: ell must be 1 or 2");
}

std::vector<Point> default_pool(const MinMaxInstance& instance) {
  std::vector<Point> pool;
  for (const MinMaxDataset& ds : instance.datasets) {
    for (const Point& p : ds.points.points) {
      bool seen = false;
      for (const Point& q : pool) {
        if (same_location(q, p)) {
          seen = true;
          break;
        }
      }
      if (!seen) pool.push_back(p);
    }
  }
  return pool;
}

// Removal costs depend only on scale_i * w_p * d_i^ell(p, v); cache that per
// dataset as a row-major |Q_i| x N matrix.
struct Prepared {
  std::vector<Point> pool;
  std::vector<std::vector<double>> contrib;  // [dataset][p * N + v]
  std::vector<double> offsets;
  std::size_t N = 0;
};

Prepared prepare(const MinMaxInstance& instance) {
  validate(instance);
  Prepared prep;
  prep.pool = instance.pool.empty() ? default_pool(instance) : instance.pool;
  prep.N = prep.pool.size();
  if (prep.N < static_cast<std::size_t>(instance.k))
    throw std::invalid_argument("minmax: candidate pool smaller than k");
  prep.contrib.reserve(instance.datasets.size());
  prep.offsets.reserve(instance.datasets.size());
  for (const MinMaxDataset& ds : instance.datasets) {
    std::vector<double> rows(ds.points.points.size() * prep.N);
    for (std::size_t p = 0; p < ds.points.points.size(); ++p) {
      const double w = ds.scale * ds.points.weights[p];
      for (std::size_t v = 0; v < prep.N; ++v)
        rows[p * prep.N + v] = w * powed(ds.metric(ds.points.points[p], prep.pool[v]), instance.ell);
    }
    prep.contrib.push_back(std::move(rows));
    prep.offsets.push_back(ds.offset);
  }
  return prep;
}

double objective_of_alive(const Prepared& prep, const std::vector<char>& alive) {
  double worst = -kInf;
  for (std::size_t i = 0; i < prep.contrib.size(); ++i) {
    const auto& rows = prep.contrib[i];
    const std::size_t count = rows.size() / std::max<std::size_t>(prep.N, 1);
    double cost = prep.offsets[i];
    for (std::size_t p = 0; p < count; ++p) {
      double best = kInf;
      for (std::size_t v = 0; v < prep.N; ++v)
        if (alive[v] && rows[p * prep.N + v] < best) best = rows[p * prep.N + v];
      cost += (best == kInf ? 0.0 : best);
    }
    worst = std::max(worst, cost);
  }
  return worst;
}

std::vector<Point> alive_points(const Prepared& prep, const std::vector<char>& alive) {
  std::vector<Point> centers;
  for (std::size_t v = 0; v < prep.N; ++v)
    if (alive[v]) centers.push_back(prep.pool[v]);
  return centers;
}

ReverseGreedyResult run_prepared(const Prepared& prep, int k, int /*ell*/, double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("minmax: budget must be positive");
  const std::size_t N = prep.N;
  const std::size_t M = prep.contrib.size();

  ReverseGreedyResult result;
  std::vector<char> alive(N, 1);
  if (N == static_cast<std::size_t>(k)) {
    result.centers = alive_points(prep, alive);
    result.objective = objective_of_alive(prep, alive);
    return result;
  }

  // Nearest / second-nearest alive candidate per (dataset, point), plus the
  // per-candidate removal cost rem[i][v] = sum over points whose nearest is v
  // of (second - nearest).
  std::vector<std::vector<std::size_t>> n1(M), n2(M);
  std::vector<std::vector<double>> rem(M);
  const auto rescan = [&](std::size_t i, std::size_t p, bool second_only) {
    const double* row = prep.contrib[i].data() + p * N;
    if (second_only) {
      const std::size_t keep = n1[i][p];
      double best = kInf;
      std::size_t best_v = N;
      for (std::size_t v = 0; v < N; ++v) {
        if (!alive[v] || v == keep) continue;
        if (row[v] < best) {
          best = row[v];
          best_v = v;
        }
      }
      n2[i][p] = best_v;
      return;
    }
    double b1 = kInf, b2 = kInf;
    std::size_t v1 = N, v2 = N;
    for (std::size_t v = 0; v < N; ++v) {
      if (!alive[v]) continue;
      const double c = row[v];
      if (c < b1) {
        b2 = b1;
        v2 = v1;
        b1 = c;
        v1 = v;
      } else if (c < b2) {
        b2 = c;
        v2 = v;
      }
    }
    n1[i][p] = v1;
    n2[i][p] = v2;
  };
  const auto gap = [&](std::size_t i, std::size_t p) {
    const double* row = prep.contrib[i].data() + p * N;
    return row[n2[i][p]] - row[n1[i][p]];
  };

  for (std::size_t i = 0; i < M; ++i) {
    const std::size_t count = prep.contrib[i].size() / N;
    n1[i].assign(count, N);
    n2[i].assign(count, N);
    rem[i].assign(N, 0.0);
    for (std::size_t p = 0; p < count; ++p) {
      rescan(i, p, false);
      rem[i][n1[i][p]] += gap(i, p);
    }
  }

  std::vector<double> logw(M, 0.0);
  std::vector<double> score(N, 0.0);
  std::vector<char> admissible(N, 1);
  const double half_budget = budget / 2.0;
  const double log_growth = std::log1p(1.0 / budget);
  const std::size_t removals = N - static_cast<std::size_t>(k);

  for (std::size_t t = 0; t < removals; ++t) {
    // Normalized weights keep exp() in range without changing the argmin.
    double top = -kInf;
    for (double lw : logw) top = std::max(top, lw);
    std::fill(score.begin(), score.end(), 0.0);
    std::fill(admissible.begin(), admissible.end(), 1);
    for (std::size_t i = 0; i < M; ++i) {
      const double w = std::exp(logw[i] - top);
      const auto& r = rem[i];
      for (std::size_t v = 0; v < N; ++v) {
        score[v] += w * r[v];
        if (r[v] > half_budget) admissible[v] = 0;
      }
    }

    std::size_t pick = N;
    double best = kInf;
    for (std::size_t v = 0; v < N; ++v) {
      if (!alive[v] || !admissible[v]) continue;
      if (score[v] < best) {
        best = score[v];
        pick = v;
      }
    }
    if (pick == N) {
      result.infeasible = true;
      result.iterations = static_cast<int>(t);
      return result;
    }

    RemovalStep step;
    step.pool_index = pick;
    step.deltas.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
      step.deltas[i] = rem[i][pick];
      logw[i] += rem[i][pick] * log_growth;
    }
    step.log_weights = logw;
    result.steps.push_back(std::move(step));

    alive[pick] = 0;
    ++result.iterations;
    // After the final removal only k centers remain; when k = 1 there is no
    // second-nearest candidate left, so stop before the bookkeeping pass.
    if (t + 1 == removals) break;
    for (std::size_t i = 0; i < M; ++i) {
      const std::size_t count = prep.contrib[i].size() / N;
      for (std::size_t p = 0; p < count; ++p) {
        if (n1[i][p] == pick) {
          rescan(i, p, false);
          rem[i][n1[i][p]] += gap(i, p);
        } else if (n2[i][p] == pick) {
          rem[i][n1[i][p]] -= gap(i, p);
          rescan(i, p, true);
          rem[i][n1[i][p]] += gap(i, p);
        }
      }
    }
  }

  result.centers = alive_points(prep, alive);
  result.objective = objective_of_alive(prep, alive);
  return result;
}

}  // namespace

double minmax_objective(const MinMaxInstance& instance, std::span<const Point> centers) {
  validate(instance);
  if (centers.empty()) throw std::invalid_argument("minmax: centers must be nonempty");
  double worst = -kInf;
  for (const MinMaxDataset& ds : instance.datasets) {
    double cost = ds.offset;
    for (std::size_t p = 0; p < ds.points.points.size(); ++p)
      cost += ds.scale * ds.points.weights[p] *
              powed(distance_to_set(ds.points.points[p], centers, ds.metric), instance.ell);
    worst = std::max(worst, cost);
  }
  return worst;
}

ReverseGreedyResult reverse_greedy(const MinMaxInstance& instance, double budget) {
  const Prepared prep = prepare(instance);
  return run_prepared(prep, instance.k, instance.ell, budget);
}

ClusteringSolution solve_with_budget_search(const MinMaxInstance& instance,
                                            std::size_t grid_points,
                                            std::vector<BudgetProbe>* probes) {
  const Prepared prep = prepare(instance);
  if (grid_points == 0) grid_points = 1;
  if (probes) probes->clear();

  ClusteringSolution solution;
  solution.kind = instance.ell == 1 ? ObjectiveKind::Median : ObjectiveKind::Means;
  if (prep.N == static_cast<std::size_t>(instance.k)) {
    std::vector<char> all(prep.N, 1);
    solution.centers = alive_points(prep, all);
    solution.objective = objective_of_alive(prep, all);
    return solution;
  }

  // Grid endpoints from the initial geometry: the smallest positive
  // single-removal cost and the best offset-free single-center cost. The
  // extra top rung admits every removal at every iteration, so at least one
  // budget always completes.
  double smallest_delta = kInf;
  double guaranteed = 0.0;
  double best_single = kInf;
  {
    std::vector<double> single(prep.N, 0.0);
    for (std::size_t i = 0; i < prep.contrib.size(); ++i) {
      const auto& rows = prep.contrib[i];
      const std::size_t count = rows.size() / prep.N;
      double max_sum = 0.0;
      std::vector<double> single_i(prep.N, 0.0);
      for (std::size_t p = 0; p < count; ++p) {
        const double* row = rows.data() + p * prep.N;
        double b1 = kInf, b2 = kInf, bmax = 0.0;
        for (std::size_t v = 0; v < prep.N; ++v) {
          if (row[v] < b1) {
            b2 = b1;
            b1 = row[v];
          } else if (row[v] < b2) {
            b2 = row[v];
          }
          bmax = std::max(bmax, row[v]);
          single_i[v] += row[v];
        }
        if (b2 != kInf && b2 - b1 > 0.0) smallest_delta = std::min(smallest_delta, b2 - b1);
        max_sum += bmax;
      }
      guaranteed = std::max(guaranteed, max_sum);
      for (std::size_t v = 0; v < prep.N; ++v) single[v] = std::max(single[v], single_i[v]);
    }
    for (std::size_t v = 0; v < prep.N; ++v) best_single = std::min(best_single, single[v]);
  }
  double lo = (smallest_delta == kInf || smallest_delta <= 0.0) ? 1.0 : smallest_delta;
  double hi = (best_single == kInf || best_single <= 0.0) ? lo : std::max(best_single, lo);
  const double top = std::max(2.0 * guaranteed, hi) + 1.0;

  std::vector<double> grid;
  if (grid_points == 1 || hi == lo) {
    grid.push_back(hi);
  } else {
    const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(grid_points - 1));
    double b = lo;
    for (std::size_t g = 0; g < grid_points; ++g) {
      grid.push_back(b);
      b *= ratio;
    }
    grid.back() = hi;
  }
  if (top > grid.back()) grid.push_back(top);

  bool found = false;
  for (double budget : grid) {
    const ReverseGreedyResult run = run_prepared(prep, instance.k, instance.ell, budget);
    if (probes) probes->push_back(BudgetProbe{budget, run.infeasible, run.objective});
    if (run.infeasible) continue;
    if (!found || run.objective < solution.objective) {
      solution.centers = run.centers;
      solution.objective = run.objective;
      found = true;
    }
  }
  if (!found)
    throw std::logic_error("minmax budget search: no feasible budget; the top rung must succeed");
  return solution;
}

}  // namespace distclust
