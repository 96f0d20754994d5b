#include "distclust/kzc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace distclust {

KzcOutcome kzc(int k, double z_prime, const WeightedPointSet& Q, double L_prime,
               const Metric& m) {
  if (k < 1) throw std::invalid_argument("kzc: k must be >= 1");
  if (!(z_prime >= 0.0)) throw std::invalid_argument("kzc: z' must be >= 0");
  if (!(L_prime >= 0.0)) throw std::invalid_argument("kzc: L' must be >= 0");
  if (!Q.has_integer_weights())
    throw std::invalid_argument("kzc: weights must be positive integers");

  const std::size_t n = Q.size();
  std::vector<char> alive(n, 1);

  KzcOutcome out;
  if (n == 0) {
    out.no = false;  // nothing uncovered
    return out;
  }
  for (int iter = 0; iter < k; ++iter) {
    // Candidates range over all of Q, including already-covered points;
    // the ball is taken over the uncovered set U only.
    double best_w = -1.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double w = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (alive[j] && m(Q.points[i], Q.points[j]) <= 2.0 * L_prime) w += Q.weights[j];
      }
      if (w > best_w) {
        best_w = w;
        best_i = i;
      }
    }
    const Point& picked = Q.points[best_i];
    const bool already = std::any_of(out.centers.begin(), out.centers.end(),
                                     [&](const Point& c) { return c.id == picked.id; });
    if (!already) out.centers.push_back(picked);
    for (std::size_t j = 0; j < n; ++j) {
      if (alive[j] && m(picked, Q.points[j]) <= 4.0 * L_prime) alive[j] = 0;
    }
  }

  double left = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (alive[j]) left += Q.weights[j];
  out.uncovered_weight = left;
  out.no = left > z_prime;
  return out;
}

ClusteringSolution gonzalez_greedy(std::span<const Point> P, int k, const Metric& m) {
  if (k < 1) throw std::invalid_argument("gonzalez_greedy: k must be >= 1");
  if (P.empty()) throw std::invalid_argument("gonzalez_greedy: empty input");

  ClusteringSolution sol;
  sol.kind = ObjectiveKind::Center;
  sol.centers.push_back(P[0]);
  std::vector<double> dist(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) dist[i] = m(P[i], P[0]);

  while (static_cast<int>(sol.centers.size()) < k) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < P.size(); ++i)
      if (dist[i] > dist[far]) far = i;
    if (dist[far] == 0.0) break;  // every point already coincides with a center
    sol.centers.push_back(P[far]);
    for (std::size_t i = 0; i < P.size(); ++i)
      dist[i] = std::min(dist[i], m(P[i], P[far]));
  }
  sol.objective = *std::max_element(dist.begin(), dist.end());
  sol.outliers_allowed = 0.0;
  return sol;
}

namespace {

std::uint64_t choose_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

ClusteringSolution brute_force_kzcenter(const WeightedPointSet& P, int k, long long z,
                                        const Metric& m,
                                        std::optional<std::vector<Point>> candidate_pool,
                                        std::uint64_t max_subsets) {
  if (k < 1) throw std::invalid_argument("brute_force_kzcenter: k must be >= 1");
  const double W = P.total_weight();
  if (z < 0 || !(static_cast<double>(z) < W))
    throw std::invalid_argument("brute_force_kzcenter: need 0 <= z < total weight");

  std::vector<Point> pool;
  if (candidate_pool) {
    pool = std::move(*candidate_pool);
  } else {
    for (const Point& p : P.points) {
      if (std::none_of(pool.begin(), pool.end(),
                       [&](const Point& q) { return same_location(q, p); }))
        pool.push_back(p);
    }
  }
  if (pool.empty()) throw std::invalid_argument("brute_force_kzcenter: empty candidate pool");

  const int kk = std::min<int>(k, static_cast<int>(pool.size()));
  if (choose_capped(pool.size(), kk, max_subsets) > max_subsets)
    throw std::runtime_error("brute_force_kzcenter: enumeration budget exceeded");

  const std::size_t n = P.size();
  // Distances precomputed pool x points; subset evaluation is then selection only.
  std::vector<std::vector<double>> D(pool.size(), std::vector<double>(n));
  for (std::size_t c = 0; c < pool.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) D[c][i] = m(pool[c], P.points[i]);

  const bool unit = std::all_of(P.weights.begin(), P.weights.end(),
                                [](double w) { return w == 1.0; });
  const double rank = W - static_cast<double>(z);

  std::vector<int> idx(kk);
  for (int i = 0; i < kk; ++i) idx[i] = i;

  std::vector<double> dmin(n), scratch(n);
  std::vector<std::pair<double, double>> dw(n);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_idx;

  while (true) {
    for (std::size_t i = 0; i < n; ++i) dmin[i] = D[idx[0]][i];
    for (int c = 1; c < kk; ++c) {
      const auto& row = D[idx[c]];
      for (std::size_t i = 0; i < n; ++i) dmin[i] = std::min(dmin[i], row[i]);
    }
    double radius;
    if (unit) {
      scratch = dmin;
      const std::size_t pos = static_cast<std::size_t>(n - 1 - z);
      std::nth_element(scratch.begin(), scratch.begin() + pos, scratch.end());
      radius = scratch[pos];
    } else {
      for (std::size_t i = 0; i < n; ++i) dw[i] = {dmin[i], P.weights[i]};
      std::stable_sort(dw.begin(), dw.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      double cum = 0.0;
      radius = dw.back().first;
      for (const auto& [d, w] : dw) {
        cum += w;
        if (cum >= rank) {
          radius = d;
          break;
        }
      }
    }
    if (radius < best) {
      best = radius;
      best_idx = idx;
    }
    // next lexicographic k-combination
    int pos = kk - 1;
    while (pos >= 0 && idx[pos] == static_cast<int>(pool.size()) - kk + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < kk; ++j) idx[j] = idx[j - 1] + 1;
  }

  ClusteringSolution sol;
  sol.kind = ObjectiveKind::Center;
  for (int i : best_idx) sol.centers.push_back(pool[i]);
  sol.objective = best;
  sol.outliers_allowed = static_cast<double>(z);
  return sol;
}

}  // namespace distclust
