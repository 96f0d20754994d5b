#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "distclust/coreset.hpp"
#include "distclust/seeding.hpp"
#include "distclust/synth.hpp"

using namespace distclust;

namespace {

Point p2(double x, double y, std::uint64_t id) { return Point{{x, y}, id}; }

Partition spread(const std::vector<Point>& pts, int m) {
  Partition parts(m);
  for (std::size_t i = 0; i < pts.size(); ++i) parts[i % m].push_back(pts[i]);
  return parts;
}

double exact_cost(const std::vector<Point>& pts, const std::vector<Point>& C, double L,
                  int ell) {
  const Metric d_L = Metric::truncated(Metric::euclidean(), L);
  double sum = 0.0;
  for (const Point& p : pts) {
    const double d = distance_to_set(p, C, d_L);
    sum += ell == 2 ? d * d : d;
  }
  return sum;
}

double coreset_cost(const Coreset& cs, const std::vector<Point>& C, int ell) {
  const Metric d_L = Metric::truncated(Metric::euclidean(), cs.L);
  double sum = 0.0;
  for (std::size_t i = 0; i < cs.entries.size(); ++i) {
    const double d = distance_to_set(cs.entries.points[i], C, d_L);
    sum += cs.entries.weights[i] * (ell == 2 ? d * d : d);
  }
  return sum;
}

}  // namespace

TEST_CASE("sample budget sizing") {
  CoresetConfig cfg;
  cfg.k = 2;

  SUBCASE("heuristic takes the larger of 10k and the shard rule") {
    cfg.sizing = CoresetConfig::Sizing::Heuristic;
    cfg.grid_size = 1;
    CHECK(coreset_sample_budget(cfg, 3000, 2, 2) == 150);  // n/(10*m*1) wins
    CHECK(coreset_sample_budget(cfg, 100, 2, 2) == 20);    // 10k wins
    cfg.grid_size = 50;
    CHECK(coreset_sample_budget(cfg, 3000, 2, 2) == 20);   // grid dilutes the shard rule
  }

  SUBCASE("explicit budgets pass through but never drop below k*m") {
    cfg.sizing = CoresetConfig::Sizing::Explicit;
    cfg.explicit_budget = 77;
    CHECK(coreset_sample_budget(cfg, 1000, 3, 2) == 77);
    cfg.explicit_budget = 1;
    CHECK(coreset_sample_budget(cfg, 1000, 3, 2) == 6);  // clamped to k*m
  }

  SUBCASE("the theorem form grows with dimension and tighter eps") {
    cfg.sizing = CoresetConfig::Sizing::TheoremBound;
    cfg.eps = 0.3;
    const std::size_t base = coreset_sample_budget(cfg, 1000, 2, 2);
    const std::size_t wider = coreset_sample_budget(cfg, 1000, 2, 10);
    CHECK(wider > base);
    cfg.eps = 0.1;
    CHECK(coreset_sample_budget(cfg, 1000, 2, 2) > base);
    cfg.eps = 0.3;
    cfg.ell = 1;
    CHECK(coreset_sample_budget(cfg, 1000, 2, 2) < base);  // eps^-2 vs eps^-4
  }
}

TEST_CASE("coincident data collapses to one exact entry") {
  std::vector<Point> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(p2(4.0, -1.0, static_cast<std::uint64_t>(i)));
  const Partition parts = spread(pts, 3);
  CoresetConfig cfg;
  cfg.k = 1;
  const Coreset cs = build_coreset_distributed(parts, 2.0, Metric::euclidean(), cfg, 5);

  REQUIRE(cs.entries.size() == 1);
  CHECK(cs.entries.points[0].coords[0] == 4.0);
  CHECK(cs.entries.weights[0] == 12.0);
  for (const std::vector<Point>& C :
       {std::vector<Point>{p2(0, 0, 90)}, std::vector<Point>{p2(4, -1, 91)}}) {
    CHECK(coreset_cost(cs, C, 2) == doctest::Approx(exact_cost(pts, C, cs.L, 2)));
  }
}

TEST_CASE("exact mode forwards the data with unit weights") {
  PlantedSpec spec;
  spec.clusters = 2;
  spec.points_per_cluster = 10;
  spec.seed = 3;
  const PlantedInstance inst = make_planted(spec);
  const Partition parts = spread(inst.points, 2);
  CoresetConfig cfg;
  cfg.k = 2;
  cfg.exact = true;
  const Coreset cs = build_coreset_distributed(parts, 10.0, Metric::euclidean(), cfg, 1);

  CHECK(cs.entries.size() == inst.points.size());
  for (double w : cs.entries.weights) CHECK(w == 1.0);
  const std::vector<Point> C = {p2(0, 0, 90), p2(20, 0, 91)};
  CHECK(coreset_cost(cs, C, 2) == doctest::Approx(exact_cost(inst.points, C, cs.L, 2)));
}

TEST_CASE("construction invariants on random instances") {
  std::mt19937_64 rng = rng_for_stream(401, 1);
  for (int trial = 0; trial < 25; ++trial) {
    PlantedSpec spec;
    spec.clusters = 2;
    spec.points_per_cluster = 30;
    spec.outliers = 6;
    spec.dim = 2;
    spec.seed = 500 + static_cast<std::uint64_t>(trial);
    const PlantedInstance inst = make_planted(spec);
    const std::size_t n = inst.points.size();
    const int m = 2 + static_cast<int>(unit_uniform(rng) * 3);
    const Partition parts = spread(inst.points, m);

    CoresetConfig cfg;
    cfg.k = 2;
    cfg.ell = 2;
    cfg.sizing = CoresetConfig::Sizing::Explicit;
    cfg.explicit_budget = 30;
    cfg.words_per_point = 2;
    const double L = 0.5 + unit_uniform(rng) * 30.0;
    const Coreset cs =
        build_coreset_distributed(parts, L, Metric::euclidean(), cfg, 1000 + trial);

    const std::size_t t = coreset_sample_budget(cfg, n, m, 2);

    // Weight conservation, positivity, entry bound, allocation bookkeeping.
    CHECK(std::abs(cs.entries.total_weight() - static_cast<double>(n)) <= 1e-6 * n);
    for (double w : cs.entries.weights) CHECK(w > 0.0);
    CHECK(cs.entries.size() <= t + static_cast<std::size_t>(m) * cfg.k);
    REQUIRE(cs.per_machine_samples.size() == static_cast<std::size_t>(m));
    std::size_t allocated = 0;
    for (std::size_t s : cs.per_machine_samples) allocated += s;
    CHECK(allocated == t);

    // Communication cap: samples and centers priced per weighted point, plus
    // a constant number of scalars per machine.
    const std::int64_t cap =
        static_cast<std::int64_t>((t + m * cfg.k) * (cfg.words_per_point + 1) + 4 * m);
    CHECK(cs.ledger.total_words() <= cap);
    CHECK(cs.rounds_executed >= 3);
  }
}

TEST_CASE("a machine with zero spread contributes only its center") {
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(p2(1.0, 1.0, static_cast<std::uint64_t>(i)));
  for (int i = 0; i < 6; ++i)
    pts.push_back(p2(10.0 + 0.3 * i, 0.0, static_cast<std::uint64_t>(6 + i)));
  Partition parts(2);
  for (int i = 0; i < 6; ++i) parts[0].push_back(pts[static_cast<std::size_t>(i)]);
  for (int i = 6; i < 12; ++i) parts[1].push_back(pts[static_cast<std::size_t>(i)]);

  CoresetConfig cfg;
  cfg.k = 1;
  cfg.sizing = CoresetConfig::Sizing::Explicit;
  cfg.explicit_budget = 8;
  const Coreset cs = build_coreset_distributed(parts, 20.0, Metric::euclidean(), cfg, 2);

  // Machine 1 has zero local cost, so its points are never sampled; its whole
  // mass rides on the center entry at (1, 1).
  CHECK(cs.per_machine_samples[0] == 0);
  double coincident_weight = 0.0;
  for (std::size_t i = 0; i < cs.entries.size(); ++i)
    if (same_location(cs.entries.points[i], pts[0])) coincident_weight += cs.entries.weights[i];
  CHECK(coincident_weight == 6.0);
  CHECK(std::abs(cs.entries.total_weight() - 12.0) <= 1e-6 * 12.0);
}

TEST_CASE("importance sampling is unbiased for a fixed center set") {
  PlantedSpec spec;
  spec.clusters = 2;
  spec.points_per_cluster = 40;
  spec.outliers = 8;
  spec.dim = 2;
  spec.separation = 15.0;
  spec.seed = 71;
  const PlantedInstance inst = make_planted(spec);
  const Partition parts = spread(inst.points, 3);
  const std::vector<Point> C = {p2(2.0, 1.0, 900), p2(12.0, -2.0, 901)};
  const double L = 25.0;

  CoresetConfig cfg;
  cfg.k = 2;
  cfg.ell = 2;
  cfg.sizing = CoresetConfig::Sizing::Explicit;
  cfg.explicit_budget = 25;

  const double exact = exact_cost(inst.points, C, L, 2);
  double mean = 0.0;
  const int builds = 500;
  for (int s = 0; s < builds; ++s) {
    const Coreset cs =
        build_coreset_distributed(parts, L, Metric::euclidean(), cfg, 9000 + s);
    mean += coreset_cost(cs, C, 2);
  }
  mean /= builds;
  CHECK(std::abs(mean - exact) <= 0.02 * exact);
}

TEST_CASE("cost ratios concentrate for random center sets") {
  PlantedSpec spec;
  spec.clusters = 2;
  spec.points_per_cluster = 1000;
  spec.outliers = 40;
  spec.dim = 2;
  spec.seed = 13;
  const PlantedInstance inst = make_planted(spec);
  const Partition parts = spread(inst.points, 2);

  CoresetConfig cfg;
  cfg.k = 2;
  cfg.ell = 2;
  cfg.eps = 0.3;
  cfg.sizing = CoresetConfig::Sizing::Heuristic;  // n/(10m) = 102 samples
  cfg.grid_size = 1;
  const double L = 30.0;
  const Coreset cs = build_coreset_distributed(parts, L, Metric::euclidean(), cfg, 4);

  std::mt19937_64 rng = rng_for_stream(405, 2);
  int in_band = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    std::vector<Point> C;
    for (int c = 0; c < 2; ++c)
      C.push_back(p2(unit_uniform(rng) * 30.0 - 5.0, unit_uniform(rng) * 10.0 - 5.0,
                     static_cast<std::uint64_t>(950 + c)));
    const double ratio = coreset_cost(cs, C, 2) / exact_cost(inst.points, C, L, 2);
    if (ratio >= 0.7 && ratio <= 1.3) ++in_band;
  }
  CHECK(in_band >= trials * 9 / 10);
}

TEST_CASE("builds are deterministic and serializable") {
  PlantedSpec spec;
  spec.clusters = 2;
  spec.points_per_cluster = 15;
  spec.seed = 21;
  const PlantedInstance inst = make_planted(spec);
  const Partition parts = spread(inst.points, 2);
  CoresetConfig cfg;
  cfg.k = 2;

  const Coreset a = build_coreset_distributed(parts, 5.0, Metric::euclidean(), cfg, 77);
  const Coreset b = build_coreset_distributed(parts, 5.0, Metric::euclidean(), cfg, 77);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const Coreset c = build_coreset_distributed(parts, 5.0, Metric::euclidean(), cfg, 78);
  CHECK(a.to_json().dump() != c.to_json().dump());

  SUBCASE("JSON schema") {
    const nlohmann::json j = a.to_json();
    for (const char* key : {"L", "n", "seed", "entries", "per_machine_samples", "ledger"})
      CHECK(j.contains(key));
    REQUIRE(j["entries"].is_array());
    REQUIRE_FALSE(j["entries"].empty());
    // Each row is coords... then weight.
    CHECK(j["entries"][0].size() == 3);
  }

  SUBCASE("CSV header carries the build identity") {
    std::ostringstream os;
    a.write_csv(os);
    const std::string text = os.str();
    CHECK(text.find("# L=") == 0);
    CHECK(text.find("n=30") != std::string::npos);
    CHECK(text.find("seed=77") != std::string::npos);
    CHECK(text.find("x0,x1,weight") != std::string::npos);
  }
}
