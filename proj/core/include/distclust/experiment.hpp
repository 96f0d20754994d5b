#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "distclust/dataset.hpp"
#include "distclust/point.hpp"

namespace distclust {

// One experiment: an algorithm, a dataset, base parameters, an optional
// sweep axis, and the seeds to repeat over. Rows come out value-major,
// seed-minor.
struct ExperimentSpec {
  std::string algorithm;  // see registered_algorithms()
  std::string dataset_name;
  int k = 1;
  long long z = 0;
  double eps = 0.1;
  int machines = 1;
  int words_per_point = 0;
  std::vector<std::uint64_t> seeds = {1};
  PartitionerKind partitioner = PartitionerKind::Random;
  std::string vary;            // "", "z", "k", "eps", or "machines"
  std::vector<double> values;  // sweep values for `vary`

  void validate() const;
};

struct ExperimentRow {
  std::string algorithm;
  std::string dataset;
  std::string partitioner;
  int k = 0;
  long long z = 0;
  double eps = 0.0;
  int machines = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double objective_at_z = 0.0;
  bool has_bicriteria = false;
  double objective_at_bicriteria_z = 0.0;
  double bicriteria_z = 0.0;
  std::int64_t total_words = 0;
  int rounds = 0;
  double wall_seconds = 0.0;  // reported in the JSON summary, never the CSV
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  nlohmann::json summary;  // per-value means over seeds, wall time, failures
  bool all_ok = false;
};

// Algorithm ids accepted by ExperimentSpec::algorithm.
std::vector<std::string> registered_algorithms();

// Runs every (value, seed) combination. Rows are dispatched to a worker
// pool (size from the CLUSTER_WORKERS environment variable, default the
// hardware concurrency); output is independent of the pool size. A failing
// row records its error and the run continues.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::vector<Point>& points);

// Deterministic CSV: one row per run, stable column set, no timing data, so
// identical spec + seeds give byte-identical output.
void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

}  // namespace distclust
