#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"

#include "distclust/aggregate.hpp"
#include "distclust/seeding.hpp"

using namespace distclust;

namespace {

Point p1(double x, std::uint64_t id) { return Point{{x}, id}; }

std::vector<Point> line_points(std::initializer_list<double> xs) {
  std::vector<Point> pts;
  std::uint64_t id = 0;
  for (double x : xs) pts.push_back(p1(x, id++));
  return pts;
}

// Asserts every structural guarantee of the aggregation pass.
void check_invariants(const std::vector<Point>& Q, double L, double y, const Metric& m,
                      const AggregationResult& r) {
  // Conservation: summary weight plus discarded count equals the input size.
  CHECK(r.summary.total_weight() + static_cast<double>(r.discarded.size()) ==
        static_cast<double>(Q.size()));

  // Assignment: every carried point sits within 4L of its summary entry, and
  // each entry's weight counts exactly its assigned points.
  std::map<std::size_t, double> carried;
  for (const auto& [id, slot] : r.assignment) {
    REQUIRE(slot < r.summary.size());
    const Point* orig = nullptr;
    for (const Point& q : Q)
      if (q.id == id) orig = &q;
    REQUIRE(orig != nullptr);
    CHECK(m(*orig, r.summary.points[slot]) <= 4.0 * L + 1e-12);
    carried[slot] += 1.0;
  }
  for (std::size_t s = 0; s < r.summary.size(); ++s)
    CHECK(r.summary.weights[s] == carried[s]);

  // Termination: every input location's 2L-ball over the surviving set is
  // within the threshold (and a fortiori its L-ball).
  for (const Point& c : Q) {
    double ball2 = 0.0, ball1 = 0.0;
    for (const Point& u : r.discarded) {
      if (m(c, u) <= 2.0 * L) ball2 += 1.0;
      if (m(c, u) <= L) ball1 += 1.0;
    }
    CHECK(ball2 <= y);
    CHECK(ball1 <= y);
  }
}

}  // namespace

TEST_CASE("aggregation worked values") {
  const Metric eu = Metric::euclidean();

  SUBCASE("dense pair collapses to one entry; far point discarded") {
    const std::vector<Point> Q = line_points({0.0, 0.1, 9.0});
    const AggregationResult r = aggregate(Q, 1.0, 1.0, eu);
    REQUIRE(r.summary.size() == 1);
    CHECK(r.summary.points[0].coords[0] == 0.0);
    CHECK(r.summary.weights[0] == 2.0);
    REQUIRE(r.discarded.size() == 1);
    CHECK(r.discarded[0].coords[0] == 9.0);
    check_invariants(Q, 1.0, 1.0, eu, r);
  }

  SUBCASE("high threshold discards everything") {
    const std::vector<Point> Q = line_points({0.0, 1.0});
    const AggregationResult r = aggregate(Q, 1.0, 5.0, eu);
    CHECK(r.summary.empty());
    CHECK(r.discarded.size() == 2);
    check_invariants(Q, 1.0, 5.0, eu, r);
  }

  SUBCASE("empty input") {
    const AggregationResult r = aggregate(std::vector<Point>{}, 1.0, 1.0, eu);
    CHECK(r.summary.empty());
    CHECK(r.discarded.empty());
    CHECK(r.assignment.empty());
  }

  SUBCASE("zero threshold keeps every occupied location") {
    const std::vector<Point> Q = line_points({0.0, 0.0, 7.0});
    const AggregationResult r = aggregate(Q, 1.0, 0.0, eu);
    CHECK(r.discarded.empty());
    CHECK(r.summary.total_weight() == 3.0);
    check_invariants(Q, 1.0, 0.0, eu, r);
  }
}

TEST_CASE("aggregation invariants hold on random instances under both policies") {
  std::mt19937_64 rng = rng_for_stream(211, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Point> Q;
    const int n = 1 + static_cast<int>(unit_uniform(rng) * 40);
    for (int i = 0; i < n; ++i)
      Q.push_back(p1(unit_uniform(rng) * 30.0, static_cast<std::uint64_t>(i)));
    const double L = unit_uniform(rng) * 3.0;
    const double y = unit_uniform(rng) * 4.0;
    const Metric eu = Metric::euclidean();
    check_invariants(Q, L, y, eu, aggregate(Q, L, y, eu, AggregationPolicy::DensestFirst));
    check_invariants(Q, L, y, eu, aggregate(Q, L, y, eu, AggregationPolicy::FirstEligible));
  }
}

TEST_CASE("summary size bound against a planted witness") {
  const Metric eu = Metric::euclidean();
  std::mt19937_64 rng = rng_for_stream(223, 2);

  SUBCASE("two clusters plus scattered outliers") {
    // Witness: 2 centers of radius <= L = 1 covering all but 4 far points.
    std::vector<Point> Q;
    std::uint64_t id = 0;
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 12; ++i)
        Q.push_back(p1(c * 50.0 + unit_uniform(rng) * 2.0 - 1.0, id++));
    const std::vector<double> far = {200.0, 300.0, 400.0, 500.0};
    for (double x : far) Q.push_back(p1(x, id++));

    ClusteringSolution witness;
    witness.centers = {p1(0.0, 900), p1(50.0, 901)};
    witness.outliers_allowed = static_cast<double>(far.size());
    const AggregationResult r = aggregate(Q, 1.0, 2.0, eu);
    CHECK(verify_qprime_bound(r, Q, witness, 2.0, 1.0, eu));
    CHECK(r.summary.size() <= 2 + 4 / 2);
  }

  SUBCASE("no outliers: summary stays within k entries") {
    std::vector<Point> Q;
    std::uint64_t id = 0;
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 8; ++i)
        Q.push_back(p1(c * 40.0 + unit_uniform(rng) * 1.0, id++));
    ClusteringSolution witness;
    witness.centers = {p1(0.5, 900), p1(40.5, 901), p1(80.5, 902)};
    const AggregationResult r = aggregate(Q, 1.0, 1.5, eu);
    CHECK(verify_qprime_bound(r, Q, witness, 1.5, 1.0, eu));
    CHECK(r.summary.size() <= 3);
  }

  SUBCASE("single cluster, unit threshold") {
    std::vector<Point> Q;
    for (int i = 0; i < 10; ++i)
      Q.push_back(p1(unit_uniform(rng) * 0.5, static_cast<std::uint64_t>(i)));
    ClusteringSolution witness;
    witness.centers = {p1(0.25, 900)};
    const AggregationResult r = aggregate(Q, 1.0, 1.0, eu);
    CHECK(verify_qprime_bound(r, Q, witness, 1.0, 1.0, eu));
    CHECK(r.summary.size() <= 1);
  }

  SUBCASE("an invalid witness is an error, not a false") {
    const std::vector<Point> Q = line_points({0.0, 100.0, 200.0, 300.0});
    ClusteringSolution witness;
    witness.centers = {p1(0.0, 900)};  // covers only one point at L=1
    const AggregationResult r = aggregate(Q, 1.0, 1.0, eu);
    CHECK_THROWS_AS(verify_qprime_bound(r, Q, witness, 1.0, 1.0, eu), std::exception);
  }
}
