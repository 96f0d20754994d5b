#include "distclust/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "distclust/baselines.hpp"
#include "distclust/dist_kzc.hpp"
#include "distclust/median_means.hpp"
#include "distclust/text.hpp"

namespace distclust {
namespace {

struct RunParams {
  int k = 1;
  long long z = 0;
  double eps = 0.1;
  int machines = 1;
  int words_per_point = 0;
  std::uint64_t seed = 0;
  PartitionerKind partitioner = PartitionerKind::Random;
};

struct AlgorithmOutcome {
  double objective_at_z = 0.0;
  bool has_bicriteria = false;
  double objective_at_bicriteria_z = 0.0;
  double bicriteria_z = 0.0;
  std::int64_t total_words = 0;
  int rounds = 0;
};

using AlgorithmFn =
    std::function<AlgorithmOutcome(const std::vector<Point>&, const RunParams&)>;

Partition make_partition(const std::vector<Point>& points, const RunParams& p) {
  return partition_dataset(points, p.machines, p.partitioner, p.seed);
}

AlgorithmOutcome run_dist_kzc(const std::vector<Point>& points, const RunParams& p,
                              DriverMode mode) {
  DistKzcConfig config;
  config.k = p.k;
  config.z = p.z;
  config.eps = p.eps;
  config.words_per_point = p.words_per_point;
  config.seed = p.seed;
  const DistKzcReport report = dist_kzc_full(config, make_partition(points, p), mode);
  AlgorithmOutcome out;
  out.objective_at_z = report.objective_at_z;
  out.has_bicriteria = true;
  out.objective_at_bicriteria_z = report.objective_at_bicriteria_z;
  out.bicriteria_z = static_cast<double>(report.bicriteria_z);
  out.total_words = report.ledger.total_words();
  out.rounds = report.driver_rounds;
  return out;
}

AlgorithmOutcome run_median_means(const std::vector<Point>& points, const RunParams& p,
                                  int ell) {
  MedianMeansConfig config;
  config.k = p.k;
  config.z = p.z;
  config.ell = ell;
  config.eps = p.eps;
  config.seed = p.seed;
  config.words_per_point = p.words_per_point;
  const MedianMeansReport report =
      solve_kz_median_means_distributed(make_partition(points, p), config);
  AlgorithmOutcome out;
  out.objective_at_z = report.objective_at_z;
  out.has_bicriteria = true;
  out.objective_at_bicriteria_z = report.solution.objective;
  out.bicriteria_z = report.bicriteria_z;
  out.total_words = report.ledger.total_words();
  out.rounds = report.rounds_executed;
  return out;
}

AlgorithmOutcome from_baseline(const BaselineRun& run) {
  AlgorithmOutcome out;
  out.objective_at_z = run.solution.objective;
  out.total_words = run.ledger.total_words();
  out.rounds = run.rounds_executed;
  return out;
}

const std::map<std::string, AlgorithmFn>& registry() {
  static const std::map<std::string, AlgorithmFn> algorithms = {
      {"dist-kzc",
       [](const std::vector<Point>& pts, const RunParams& p) {
         return run_dist_kzc(pts, p, DriverMode::BinarySearch);
       }},
      {"dist-kzc-parallel",
       [](const std::vector<Point>& pts, const RunParams& p) {
         return run_dist_kzc(pts, p, DriverMode::ParallelGuesses);
       }},
      {"kz-median",
       [](const std::vector<Point>& pts, const RunParams& p) {
         return run_median_means(pts, p, 1);
       }},
      {"kz-means",
       [](const std::vector<Point>& pts, const RunParams& p) {
         return run_median_means(pts, p, 2);
       }},
      {"random-random",
       [](const std::vector<Point>& pts, const RunParams& p) {
         BaselineConfig config;
         config.words_per_point = p.words_per_point;
         return from_baseline(
             random_random_run(make_partition(pts, p), p.k, static_cast<int>(p.z), p.seed,
                               config));
       }},
      {"random-kzc",
       [](const std::vector<Point>& pts, const RunParams& p) {
         BaselineConfig config;
         config.words_per_point = p.words_per_point;
         return from_baseline(
             random_kzc_run(make_partition(pts, p), p.k, static_cast<int>(p.z), p.seed, config));
       }},
      {"mkcwm",
       [](const std::vector<Point>& pts, const RunParams& p) {
         BaselineConfig config;
         config.words_per_point = p.words_per_point;
         return from_baseline(
             mkcwm_style_run(make_partition(pts, p), p.k, static_cast<int>(p.z), p.seed, config));
       }},
      {"lloyd",
       [](const std::vector<Point>& pts, const RunParams& p) {
         BaselineConfig config;
         config.words_per_point = p.words_per_point;
         return from_baseline(lloyd_kmeans_run(pts, p.k, p.seed, config));
       }},
      {"kmeans--",
       [](const std::vector<Point>& pts, const RunParams& p) {
         BaselineConfig config;
         config.words_per_point = p.words_per_point;
         return from_baseline(
             kmeans_minus_minus_run(pts, p.k, static_cast<int>(p.z), p.seed, config));
       }},
  };
  return algorithms;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CLUSTER_WORKERS")) {
    try {
      const long parsed = std::stol(env);
      if (parsed >= 1) workers = static_cast<std::size_t>(parsed);
    } catch (const std::exception&) {
      // Unparseable setting: keep the default.
    }
  }
  return std::max<std::size_t>(1, std::min(workers, jobs));
}

std::string csv_escape(const std::string& text) {
  std::string out = text;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (registry().find(algorithm) == registry().end()) {
    std::string known;
    for (const auto& [name, fn] : registry()) {
      if (!known.empty()) known += ", ";
      known += name;
    }
    throw std::invalid_argument("unknown algorithm '" + algorithm + "' (known: " + known + ")");
  }
  if (seeds.empty()) throw std::invalid_argument("experiment: seeds must be nonempty");
  if (k < 1) throw std::invalid_argument("experiment: k must be >= 1");
  if (z < 0) throw std::invalid_argument("experiment: z must be >= 0");
  if (machines < 1) throw std::invalid_argument("experiment: machines must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("experiment: eps must be positive");
  if (!vary.empty()) {
    if (vary != "z" && vary != "k" && vary != "eps" && vary != "machines")
      throw std::invalid_argument("experiment: vary must be one of z, k, eps, machines");
    if (values.empty()) throw std::invalid_argument("experiment: sweep values must be nonempty");
    for (double v : values)
      if (!(v > 0.0)) throw std::invalid_argument("experiment: sweep values must be positive");
  }
}

std::vector<std::string> registered_algorithms() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::vector<Point>& points) {
  spec.validate();
  if (points.empty()) throw std::invalid_argument("experiment: no points");

  // Expand the sweep into per-row parameters, value-major then seed-minor.
  std::vector<RunParams> params;
  const std::vector<double> axis = spec.vary.empty() ? std::vector<double>{0.0} : spec.values;
  for (double value : axis) {
    RunParams base;
    base.k = spec.k;
    base.z = spec.z;
    base.eps = spec.eps;
    base.machines = spec.machines;
    base.words_per_point = spec.words_per_point;
    base.partitioner = spec.partitioner;
    if (spec.vary == "z") base.z = static_cast<long long>(value);
    if (spec.vary == "k") base.k = static_cast<int>(value);
    if (spec.vary == "eps") base.eps = value;
    if (spec.vary == "machines") base.machines = static_cast<int>(value);
    for (std::uint64_t seed : spec.seeds) {
      base.seed = seed;
      params.push_back(base);
    }
  }

  ExperimentResult result;
  result.rows.resize(params.size());
  const AlgorithmFn& algorithm = registry().at(spec.algorithm);

  std::atomic<std::size_t> cursor{0};
  const auto work = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= params.size()) break;
      const RunParams& p = params[i];
      ExperimentRow& row = result.rows[i];
      row.algorithm = spec.algorithm;
      row.dataset = spec.dataset_name;
      row.partitioner = partitioner_name(p.partitioner);
      row.k = p.k;
      row.z = p.z;
      row.eps = p.eps;
      row.machines = p.machines;
      row.seed = p.seed;
      const auto start = std::chrono::steady_clock::now();
      try {
        const AlgorithmOutcome outcome = algorithm(points, p);
        row.ok = true;
        row.objective_at_z = outcome.objective_at_z;
        row.has_bicriteria = outcome.has_bicriteria;
        row.objective_at_bicriteria_z = outcome.objective_at_bicriteria_z;
        row.bicriteria_z = outcome.bicriteria_z;
        row.total_words = outcome.total_words;
        row.rounds = outcome.rounds;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
      row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
    }
  };

  const std::size_t workers = worker_count(params.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  result.all_ok = std::all_of(result.rows.begin(), result.rows.end(),
                              [](const ExperimentRow& r) { return r.ok; });

  // Per-value means over the seeds that succeeded.
  nlohmann::json means = nlohmann::json::array();
  const std::size_t per_value = spec.seeds.size();
  for (std::size_t g = 0; g < axis.size(); ++g) {
    double sum_obj = 0.0, sum_bi = 0.0, sum_words = 0.0, sum_rounds = 0.0;
    std::size_t ok_count = 0;
    bool all_bi = true;
    for (std::size_t s = 0; s < per_value; ++s) {
      const ExperimentRow& row = result.rows[g * per_value + s];
      if (!row.ok) continue;
      ++ok_count;
      sum_obj += row.objective_at_z;
      all_bi = all_bi && row.has_bicriteria;
      sum_bi += row.objective_at_bicriteria_z;
      sum_words += static_cast<double>(row.total_words);
      sum_rounds += row.rounds;
    }
    nlohmann::json entry;
    if (!spec.vary.empty()) entry["value"] = axis[g];
    entry["seeds_ok"] = ok_count;
    if (ok_count > 0) {
      const double d = static_cast<double>(ok_count);
      entry["mean_objective_at_z"] = sum_obj / d;
      if (all_bi) entry["mean_objective_at_bicriteria_z"] = sum_bi / d;
      entry["mean_total_words"] = sum_words / d;
      entry["mean_rounds"] = sum_rounds / d;
    }
    means.push_back(std::move(entry));
  }

  double wall_total = 0.0;
  for (const ExperimentRow& row : result.rows) wall_total += row.wall_seconds;
  result.summary = nlohmann::json{{"algorithm", spec.algorithm},
                                  {"dataset", spec.dataset_name},
                                  {"partitioner", partitioner_name(spec.partitioner)},
                                  {"k", spec.k},
                                  {"z", spec.z},
                                  {"eps", spec.eps},
                                  {"machines", spec.machines},
                                  {"vary", spec.vary},
                                  {"values", spec.vary.empty() ? nlohmann::json::array()
                                                               : nlohmann::json(spec.values)},
                                  {"seeds", spec.seeds},
                                  {"rows", result.rows.size()},
                                  {"failures", std::count_if(result.rows.begin(),
                                                             result.rows.end(),
                                                             [](const ExperimentRow& r) {
                                                               return !r.ok;
                                                             })},
                                  {"means", std::move(means)},
                                  {"wall_seconds", wall_total}};
  return result;
}

void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "algorithm,dataset,partitioner,k,z,eps,machines,seed,status,objective_at_z,"
        "objective_at_bicriteria_z,bicriteria_z,total_words,rounds,error\n";
  for (const ExperimentRow& row : rows) {
    os << csv_escape(row.algorithm) << "," << csv_escape(row.dataset) << ","
       << row.partitioner << "," << row.k << "," << row.z << "," << format_double(row.eps)
       << "," << row.machines << "," << row.seed << "," << (row.ok ? "ok" : "failed") << ",";
    if (row.ok) os << format_double(row.objective_at_z);
    os << ",";
    if (row.ok && row.has_bicriteria)
      os << format_double(row.objective_at_bicriteria_z) << "," << format_double(row.bicriteria_z);
    else
      os << ",";
    os << "," << (row.ok ? std::to_string(row.total_words) : "") << ","
       << (row.ok ? std::to_string(row.rounds) : "") << "," << csv_escape(row.error) << "\n";
  }
}

}  // namespace distclust
