#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "distclust/dist_kzc.hpp"
#include "distclust/metric.hpp"
#include "distclust/point.hpp"
#include "distclust/simnet.hpp"

namespace distclust {

// Sizing and build parameters for one distributed coreset.
struct CoresetConfig {
  int k = 1;
  int ell = 2;        // cost exponent: 1 for median, 2 for means
  double eps = 0.3;
  double delta = 0.1;

  // How many samples the coordinator allocates across machines.
  //  - Heuristic:     max{10k, n / (10 * m * grid_size)}
  //  - TheoremBound:  bound_constant * (eps^-2l * (k*dim + ln(1/delta)) + mk
  //                   [+ mk*ln(mk/delta) for ell = 2])
  //  - Explicit:      explicit_budget
  // Every mode is clamped up to k*m so each machine can be allocated its
  // local center count.
  enum class Sizing { Heuristic, TheoremBound, Explicit };
  Sizing sizing = Sizing::Heuristic;
  std::size_t explicit_budget = 0;
  double bound_constant = 1.0;
  std::size_t grid_size = 1;  // |L-grid| the caller builds coresets for

  bool exact = false;      // forward the data itself with unit weights
  int lloyd_iterations = 10;
  int words_per_point = 0;
};

std::size_t coreset_sample_budget(const CoresetConfig& config, std::size_t n, std::size_t m,
                                  std::size_t dim);

// A weighted summary of the data under the truncated metric d_L. Total
// weight equals the source size; every stored weight is positive.
struct Coreset {
  double L = 0.0;
  std::size_t source_size = 0;
  std::uint64_t seed = 0;
  WeightedPointSet entries;
  std::vector<std::size_t> per_machine_samples;  // draws allocated per machine
  CommLedger ledger;
  int rounds_executed = 0;

  nlohmann::json to_json() const;
  void write_csv(std::ostream& os) const;
};

// Builds one coreset for the truncation level L over the simulated network.
//
// Three message phases: machines report their local clustering cost (one
// word) and local centers; the coordinator allocates the sample budget
// proportionally to local costs (largest-remainder rounding) and replies with
// the allocation plus the global totals; machines then ship importance
// samples weighted as total_cost / (budget * point_cost) together with one
// weight per local center, set to the cluster size minus the sample weight
// landing in that cluster. A cluster whose samples outweigh its size has its
// sample weights rescaled to the cluster size and its center dropped, which
// keeps every weight positive and the total exactly n. Coincident entries
// are merged. `base` is the underlying metric; truncation at L happens
// inside.
Coreset build_coreset_distributed(const Partition& partition, double L, const Metric& base,
                                  const CoresetConfig& config, std::uint64_t seed);

}  // namespace distclust
