// cluster: run distributed clustering algorithms and experiments from the
// command line. Subcommands:
//   run    one algorithm over one parameter setting (repeated over seeds)
//   sweep  the same, varying one axis over a list of values
//   synth  generate a planted Gaussian+outliers CSV for experiments
// Exit status: 0 when every experiment row succeeded, 1 otherwise.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "distclust/dataset.hpp"
#include "distclust/experiment.hpp"
#include "distclust/synth.hpp"
#include "distclust/text.hpp"

namespace {

// "1..5" (inclusive range), "1,2,7", or a single integer.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      const std::size_t dots = token.find("..");
      if (dots == std::string::npos) {
        seeds.push_back(std::stoull(token));
      } else {
        const std::uint64_t lo = std::stoull(token.substr(0, dots));
        const std::uint64_t hi = std::stoull(token.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument("seed range must be ascending: " + token);
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (seeds.empty()) throw std::invalid_argument("no seeds in '" + text + "'");
  return seeds;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) values.push_back(distclust::parse_double(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.empty()) throw std::invalid_argument("no values in '" + text + "'");
  return values;
}

struct CommonOptions {
  std::string algo;
  std::string input;
  std::string out = "results.csv";
  std::string summary;
  int k = 1;
  long long z = 0;
  double eps = 0.1;
  int machines = 1;
  int words_per_point = 0;
  std::string seeds = "1";
  std::string partition = "random";
  std::string delimiter = ",";
  bool skip_header = false;
  std::vector<std::size_t> drop_cols;
  std::size_t add_outliers = 0;
  double outlier_spread = 5.0;
  std::uint64_t outlier_seed = 0;
};

void add_common_options(CLI::App& cmd, CommonOptions& opt) {
  cmd.add_option("--algo", opt.algo, "algorithm id")->required();
  cmd.add_option("--input", opt.input, "input CSV of numeric rows")->required();
  cmd.add_option("--out", opt.out, "output CSV path (one row per run)");
  cmd.add_option("--summary", opt.summary, "write the JSON summary here (default: stdout)");
  cmd.add_option("--k", opt.k, "number of centers");
  cmd.add_option("--z", opt.z, "outlier budget");
  cmd.add_option("--eps", opt.eps, "accuracy parameter");
  cmd.add_option("--machines", opt.machines, "number of machines");
  cmd.add_option("--words-per-point", opt.words_per_point,
                 "ledger words per point (0 = point dimension)");
  cmd.add_option("--seeds", opt.seeds, "seed list: 1..5 or 1,2,7");
  cmd.add_option("--partition", opt.partition, "round-robin | random | sorted-skew");
  cmd.add_option("--delimiter", opt.delimiter, "CSV delimiter (one character)");
  cmd.add_flag("--skip-header", opt.skip_header, "ignore the first input line");
  cmd.add_option("--drop-cols", opt.drop_cols, "1-based input columns to drop");
  cmd.add_option("--add-outliers", opt.add_outliers, "append this many synthetic outliers");
  cmd.add_option("--outlier-spread", opt.outlier_spread, "outlier box scale vs data bounds");
  cmd.add_option("--outlier-seed", opt.outlier_seed, "seed for synthetic outliers");
}

int run_spec(const CommonOptions& opt, const std::string& vary,
             const std::string& values_text) {
  distclust::CsvOptions csv;
  if (opt.delimiter.size() != 1)
    throw std::invalid_argument("--delimiter must be a single character");
  csv.delimiter = opt.delimiter[0];
  csv.skip_header = opt.skip_header;
  csv.drop_columns = opt.drop_cols;

  distclust::Dataset dataset = distclust::ingest_csv(opt.input, csv);
  if (opt.add_outliers > 0)
    dataset = distclust::add_synthetic_outliers(dataset, opt.add_outliers, opt.outlier_spread,
                                                opt.outlier_seed);

  distclust::ExperimentSpec spec;
  spec.algorithm = opt.algo;
  spec.dataset_name = opt.input;
  spec.k = opt.k;
  spec.z = opt.z;
  spec.eps = opt.eps;
  spec.machines = opt.machines;
  spec.words_per_point = opt.words_per_point;
  spec.seeds = parse_seeds(opt.seeds);
  spec.partitioner = distclust::partitioner_from_name(opt.partition);
  spec.vary = vary;
  if (!vary.empty()) spec.values = parse_values(values_text);

  const distclust::ExperimentResult result = distclust::run_experiment(spec, dataset.rows);

  std::ofstream out(opt.out);
  if (!out) throw std::runtime_error("cannot write " + opt.out);
  distclust::write_rows_csv(out, result.rows);
  out.close();

  const std::string summary_text = result.summary.dump(2);
  if (opt.summary.empty()) {
    std::cout << summary_text << "\n";
  } else {
    std::ofstream summary(opt.summary);
    if (!summary) throw std::runtime_error("cannot write " + opt.summary);
    summary << summary_text << "\n";
  }
  return result.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed clustering with outliers"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run one algorithm configuration");
  add_common_options(*run, run_opt);

  CommonOptions sweep_opt;
  std::string vary;
  std::string values_text;
  CLI::App* sweep = app.add_subcommand("sweep", "vary one axis over a value list");
  add_common_options(*sweep, sweep_opt);
  sweep->add_option("--vary", vary, "axis: z | k | eps | machines")->required();
  sweep->add_option("--values", values_text, "comma-separated sweep values")->required();

  distclust::PlantedSpec planted;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "write a planted Gaussian+outliers CSV");
  synth->add_option("--out", synth_out, "output CSV path")->required();
  synth->add_option("--clusters", planted.clusters, "planted cluster count");
  synth->add_option("--per-cluster", planted.points_per_cluster, "points per cluster");
  synth->add_option("--outliers", planted.outliers, "uniform far outliers to append");
  synth->add_option("--dim", planted.dim, "dimension");
  synth->add_option("--separation", planted.separation, "distance between planted centers");
  synth->add_option("--sigma", planted.sigma, "within-cluster standard deviation");
  synth->add_option("--spread", planted.outlier_spread, "outlier box scale vs data bounds");
  synth->add_option("--seed", planted.seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_spec(run_opt, "", "");
    if (sweep->parsed()) return run_spec(sweep_opt, vary, values_text);
    if (synth->parsed()) {
      const distclust::PlantedInstance instance = distclust::make_planted(planted);
      std::ofstream out(synth_out);
      if (!out) throw std::runtime_error("cannot write " + synth_out);
      for (const distclust::Point& p : instance.points) {
        for (std::size_t d = 0; d < p.dim(); ++d) {
          if (d > 0) out << ",";
          out << distclust::format_double(p.coords[d]);
        }
        out << "\n";
      }
      std::cout << "wrote " << instance.points.size() << " points (" << instance.inliers
                << " inliers, " << instance.outliers << " outliers) to " << synth_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
