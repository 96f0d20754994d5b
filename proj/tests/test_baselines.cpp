#include <cmath>
#include <vector>

#include "doctest.h"

#include "distclust/baselines.hpp"
#include "distclust/seeding.hpp"

using namespace distclust;

namespace {

Point p2(double x, double y, std::uint64_t id) { return Point{{x, y}, id}; }

Partition spread(const std::vector<Point>& pts, int m) {
  Partition parts(m);
  for (std::size_t i = 0; i < pts.size(); ++i) parts[i % m].push_back(pts[i]);
  return parts;
}

std::vector<Point> grid_points(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back(p2(static_cast<double>(i % 7), static_cast<double>(i / 7),
                     static_cast<std::uint64_t>(i)));
  return pts;
}

// One tight cluster plus a handful of far outliers.
struct Contaminated {
  std::vector<Point> points;
  Point inlier_centroid{{0.0, 0.0}, 9999};
  int outliers = 0;
};

Contaminated contaminated_cluster(int inliers, int outliers, std::uint64_t seed) {
  Contaminated out;
  std::mt19937_64 rng = rng_for_stream(seed, 17);
  std::normal_distribution<double> noise(0.0, 0.5);
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < inliers; ++i) {
    const double x = noise(rng), y = noise(rng);
    sx += x;
    sy += y;
    out.points.push_back(p2(x, y, static_cast<std::uint64_t>(i)));
  }
  out.inlier_centroid.coords = {sx / inliers, sy / inliers};
  for (int i = 0; i < outliers; ++i)
    out.points.push_back(
        p2(50.0 + i, 50.0, static_cast<std::uint64_t>(inliers + i)));
  out.outliers = outliers;
  return out;
}

}  // namespace

TEST_CASE("uniform sampling baseline") {
  const std::vector<Point> pts = grid_points(12);
  const Partition parts = spread(pts, 3);

  SUBCASE("enough centers for every point gives zero cost") {
    const BaselineRun run = random_random_run(parts, 12, 0, 1);
    CHECK(run.solution.objective == doctest::Approx(0.0));
    CHECK(run.solution.centers.size() == 12);
  }

  SUBCASE("ledger charges one sample batch per machine") {
    const int k = 3, z = 2;
    BaselineConfig cfg;
    cfg.words_per_point = 2;
    const BaselineRun run = random_random_run(parts, k, z, 5, cfg);
    // Every machine holds 4 points, so each sends min(k+z, 4) = 4 points.
    CHECK(run.ledger.up_words(1) == 3 * 4 * 2);
    CHECK(run.ledger.total_words() == 3 * 4 * 2);
    CHECK(run.rounds_executed == 2);
  }

  SUBCASE("words grow linearly in the outlier budget") {
    std::vector<Point> big;
    for (int i = 0; i < 120; ++i)
      big.push_back(p2(i * 0.1, 0.0, static_cast<std::uint64_t>(i)));
    const Partition bp = spread(big, 3);
    BaselineConfig cfg;
    cfg.words_per_point = 2;
    const auto words = [&](int z) {
      return random_random_run(bp, 3, z, 9, cfg).ledger.total_words();
    };
    CHECK(words(2) == 3 * 5 * 2);
    CHECK(words(6) == 3 * 9 * 2);
    CHECK(words(12) == 3 * 15 * 2);
  }

  SUBCASE("objective is the recomputed k-center cost at z outliers") {
    const BaselineRun run = random_random_run(parts, 2, 3, 11);
    const double expect = center_cost_with_outliers(pts, run.solution.centers, 3,
                                                    Metric::euclidean());
    CHECK(run.solution.objective == doctest::Approx(expect));
  }

  SUBCASE("deterministic in the seed") {
    const BaselineRun a = random_random_run(parts, 2, 1, 42);
    const BaselineRun b = random_random_run(parts, 2, 1, 42);
    REQUIRE(a.solution.centers.size() == b.solution.centers.size());
    for (std::size_t i = 0; i < a.solution.centers.size(); ++i)
      CHECK(same_location(a.solution.centers[i], b.solution.centers[i]));
  }

  SUBCASE("refuses when the pooled sample cannot seat k centers") {
    Partition tiny(1);
    tiny[0] = {p2(0, 0, 0), p2(1, 0, 1)};
    CHECK_THROWS_AS(random_random_run(tiny, 3, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_random_run(Partition{}, 1, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_random_run(tiny, 1, 2, 1), std::invalid_argument);
  }
}

TEST_CASE("sampled covering-pass baseline") {
  const std::vector<Point> pts = grid_points(20);
  const Partition parts = spread(pts, 4);
  BaselineConfig cfg;
  cfg.words_per_point = 2;
  const BaselineRun run = random_kzc_run(parts, 3, 2, 7, cfg);

  CHECK(run.solution.centers.size() <= 3);
  CHECK(run.ledger.total_words() == 4 * 5 * 2);  // min(k+z, n_i) = 5 per machine
  const double expect = center_cost_with_outliers(pts, run.solution.centers, 2,
                                                  Metric::euclidean());
  CHECK(run.solution.objective == doctest::Approx(expect));

  const BaselineRun again = random_kzc_run(parts, 3, 2, 7, cfg);
  CHECK(again.solution.objective == run.solution.objective);
}

TEST_CASE("summary-forwarding baseline") {
  const std::vector<Point> pts = grid_points(24);
  const Partition parts = spread(pts, 3);
  BaselineConfig cfg;
  cfg.words_per_point = 2;
  const int k = 2, z = 3;
  const BaselineRun run = mkcwm_style_run(parts, k, z, 3, cfg);

  // Each machine ships k+z weighted summary points (all its locations are
  // distinct), priced at wpp+1 words apiece.
  CHECK(run.ledger.total_words() == 3 * (k + z) * (2 + 1));
  CHECK(run.rounds_executed == 2);
  CHECK_FALSE(run.note.empty());
  CHECK(run.note.find("stand-in") != std::string::npos);

  const double expect = center_cost_with_outliers(pts, run.solution.centers, z,
                                                  Metric::euclidean());
  CHECK(run.solution.objective == doctest::Approx(expect));

  SUBCASE("duplicate-heavy shards ship fewer summary points") {
    Partition dup(1);
    for (int i = 0; i < 10; ++i) dup[0].push_back(p2(i % 2 ? 1.0 : 0.0, 0.0, i));
    const BaselineRun small = mkcwm_style_run(dup, 1, 3, 2, cfg);
    CHECK(small.ledger.total_words() == 2 * 3);  // two distinct locations
  }
}

TEST_CASE("weighted Lloyd engine") {
  BaselineConfig cfg;
  std::mt19937_64 rng = rng_for_stream(1, 2);
  const Metric euclid = Metric::euclidean();

  SUBCASE("two tight pairs settle on their midpoints") {
    WeightedPointSet input;
    input.add(p2(0, 0, 0), 1.0);
    input.add(p2(1, 0, 1), 1.0);
    input.add(p2(10, 0, 2), 1.0);
    input.add(p2(11, 0, 3), 1.0);
    const LloydRun run = weighted_kmeans_minus_minus(input, 2, 0.0, 2, euclid, nullptr, cfg, rng);
    CHECK(run.objective == doctest::Approx(1.0));  // four points at distance 0.5
    std::vector<double> xs = {run.centers[0].coords[0], run.centers[1].coords[0]};
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(0.5));
    CHECK(xs[1] == doctest::Approx(10.5));
  }

  SUBCASE("a center per point zeroes the objective") {
    WeightedPointSet input;
    for (int i = 0; i < 5; ++i) input.add(p2(3.0 * i, 0, static_cast<std::uint64_t>(i)), 1.0);
    const LloydRun run = weighted_kmeans_minus_minus(input, 5, 0.0, 2, euclid, nullptr, cfg, rng);
    CHECK(run.objective == doctest::Approx(0.0));
  }

  SUBCASE("integer weights behave like expanded duplicates") {
    WeightedPointSet heavy;
    heavy.add(p2(0, 0, 0), 2.0);
    heavy.add(p2(3, 0, 1), 1.0);
    WeightedPointSet expanded;
    expanded.add(p2(0, 0, 0), 1.0);
    expanded.add(p2(0, 0, 1), 1.0);
    expanded.add(p2(3, 0, 2), 1.0);
    std::mt19937_64 r1 = rng_for_stream(9, 9), r2 = rng_for_stream(9, 9);
    const LloydRun a = weighted_kmeans_minus_minus(heavy, 1, 0.0, 2, euclid, nullptr, cfg, r1);
    const LloydRun b = weighted_kmeans_minus_minus(expanded, 1, 0.0, 2, euclid, nullptr, cfg, r2);
    CHECK(a.centers[0].coords[0] == doctest::Approx(1.0));
    CHECK(b.centers[0].coords[0] == doctest::Approx(1.0));
    CHECK(a.objective == doctest::Approx(b.objective));
  }

  SUBCASE("the objective trace never increases") {
    WeightedPointSet input;
    std::mt19937_64 gen = rng_for_stream(8, 1);
    for (int i = 0; i < 40; ++i)
      input.add(p2(unit_uniform(gen) * 10.0, unit_uniform(gen) * 10.0,
                   static_cast<std::uint64_t>(i)),
                1.0);
    for (double z : {0.0, 0.5, 3.0}) {
      std::mt19937_64 r = rng_for_stream(8, 2);
      const LloydRun run = weighted_kmeans_minus_minus(input, 3, z, 2, euclid, nullptr, cfg, r);
      for (std::size_t t = 1; t < run.objective_trace.size(); ++t)
        CHECK(run.objective_trace[t] <= run.objective_trace[t - 1] + 1e-9);
    }
  }

  SUBCASE("input validation") {
    WeightedPointSet input;
    input.add(p2(0, 0, 0), 1.0);
    CHECK_THROWS_AS(weighted_kmeans_minus_minus(input, 0, 0.0, 2, euclid, nullptr, cfg, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_kmeans_minus_minus(input, 1, 0.0, 3, euclid, nullptr, cfg, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_kmeans_minus_minus(input, 1, 1.0, 2, euclid, nullptr, cfg, rng),
                    std::invalid_argument);  // excluded weight swallows everything
    WeightedPointSet empty;
    CHECK_THROWS_AS(weighted_kmeans_minus_minus(empty, 1, 0.0, 2, euclid, nullptr, cfg, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("centralized Lloyd baseline") {
  const std::vector<Point> pairs = {p2(0, 0, 0), p2(1, 0, 1), p2(10, 0, 2), p2(11, 0, 3)};
  const BaselineRun run = lloyd_kmeans_run(pairs, 2, 4);

  CHECK(run.solution.objective == doctest::Approx(1.0));
  CHECK(run.ledger.total_words() == 4 * 2);  // full upload, dimension words each
  CHECK(run.ledger.up_words(1) == 4 * 2);
  CHECK(run.rounds_executed == 2);
  CHECK_FALSE(run.note.empty());

  CHECK(lloyd_kmeans_run(pairs, 4, 1).solution.objective == doctest::Approx(0.0));
  CHECK_THROWS_AS(lloyd_kmeans_run(std::vector<Point>{}, 1, 1), std::invalid_argument);
}

TEST_CASE("outlier-robust Lloyd baseline") {
  SUBCASE("zero budget reproduces plain Lloyd exactly") {
    const std::vector<Point> pts = grid_points(30);
    const BaselineRun plain = lloyd_kmeans_run(pts, 3, 12);
    const BaselineRun robust = kmeans_minus_minus_run(pts, 3, 0, 12);
    REQUIRE(plain.solution.centers.size() == robust.solution.centers.size());
    for (std::size_t i = 0; i < plain.solution.centers.size(); ++i) {
      CHECK(plain.solution.centers[i].coords[0] == robust.solution.centers[i].coords[0]);
      CHECK(plain.solution.centers[i].coords[1] == robust.solution.centers[i].coords[1]);
    }
    CHECK(plain.solution.objective == robust.solution.objective);
  }

  SUBCASE("excluding the planted outliers recovers the clean centroid") {
    const Contaminated data = contaminated_cluster(60, 5, 31);
    const BaselineRun robust = kmeans_minus_minus_run(data.points, 1, data.outliers, 6);
    REQUIRE(robust.solution.centers.size() == 1);
    const Metric euclid = Metric::euclidean();
    const double drift = euclid(robust.solution.centers[0], data.inlier_centroid);
    // Outliers sit ~70 away from the cluster; recovery lands within 1% of that.
    CHECK(drift <= 0.7);

    const BaselineRun naive = lloyd_kmeans_run(data.points, 1, 6);
    const double naive_drift = euclid(naive.solution.centers[0], data.inlier_centroid);
    CHECK(naive_drift > drift);
    CHECK(naive_drift > 0.7);
  }

  SUBCASE("trace is monotone and matches the run") {
    const Contaminated data = contaminated_cluster(50, 4, 77);
    const LloydRun trace = kmeans_minus_minus_trace(data.points, 2, 4, 15);
    REQUIRE_FALSE(trace.objective_trace.empty());
    for (std::size_t t = 1; t < trace.objective_trace.size(); ++t)
      CHECK(trace.objective_trace[t] <= trace.objective_trace[t - 1] + 1e-9);
    const BaselineRun run = kmeans_minus_minus_run(data.points, 2, 4, 15);
    CHECK(run.solution.objective == doctest::Approx(trace.objective_trace.back()));
  }

  SUBCASE("budget validation") {
    const std::vector<Point> pts = grid_points(5);
    CHECK_THROWS_AS(kmeans_minus_minus_run(pts, 1, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_minus_minus_run(pts, 1, -1, 1), std::invalid_argument);
  }
}
