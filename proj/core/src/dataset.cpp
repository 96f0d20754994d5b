#include "distclust/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "distclust/seeding.hpp"
#include "distclust/synth.hpp"
#include "distclust/text.hpp"

namespace distclust {
namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, delimiter)) cells.push_back(cell);
  if (!line.empty() && line.back() == delimiter) cells.push_back("");
  return cells;
}

[[noreturn]] void cell_error(const std::string& path, std::size_t line, std::size_t col,
                             const std::string& what) {
  throw std::invalid_argument(path + ": cell (" + std::to_string(line) + "," +
                              std::to_string(col) + ") " + what);
}

}  // namespace

Dataset ingest_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("ingest_csv: cannot open " + path);

  const auto dropped = [&](std::size_t col) {
    return std::find(options.drop_columns.begin(), options.drop_columns.end(), col) !=
           options.drop_columns.end();
  };

  Dataset dataset;
  dataset.name = path;
  dataset.provenance = "csv:" + path;

  std::string line;
  std::size_t file_line = 0;
  std::size_t expected_width = 0;
  while (std::getline(file, line)) {
    ++file_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (options.skip_header && file_line == 1) continue;
    if (line.empty()) continue;

    const std::vector<std::string> cells = split_line(line, options.delimiter);
    Point row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t col = c + 1;
      if (dropped(col)) continue;
      double value = 0.0;
      try {
        value = parse_double(cells[c]);
      } catch (const std::invalid_argument&) {
        cell_error(path, file_line, col, "is not numeric: '" + cells[c] + "'");
      }
      if (!std::isfinite(value)) cell_error(path, file_line, col, "is not finite");
      row.coords.push_back(value);
    }
    if (row.coords.empty())
      throw std::invalid_argument(path + ": row at line " + std::to_string(file_line) +
                                  " has no columns left after drops");
    if (expected_width == 0) {
      expected_width = row.coords.size();
    } else if (row.coords.size() != expected_width) {
      throw std::invalid_argument(path + ": row at line " + std::to_string(file_line) + " has " +
                                  std::to_string(row.coords.size()) + " columns, expected " +
                                  std::to_string(expected_width));
    }
    row.id = dataset.rows.size();
    dataset.rows.push_back(std::move(row));
  }
  if (dataset.rows.empty()) throw std::invalid_argument(path + ": no data rows");
  return dataset;
}

Dataset add_synthetic_outliers(const Dataset& dataset, std::size_t count, double spread,
                               std::uint64_t seed) {
  if (count == 0) return dataset;
  if (dataset.rows.empty())
    throw std::invalid_argument("add_synthetic_outliers: dataset must be nonempty");
  Dataset out = dataset;
  auto rng = rng_for_stream(seed, 0x0471e5);
  std::vector<Point> extra =
      uniform_box_outliers(dataset.rows, count, spread, dataset.rows.size(), rng);
  out.rows.insert(out.rows.end(), extra.begin(), extra.end());
  out.provenance += "; +" + std::to_string(count) + " synthetic outliers (spread=" +
                    format_double(spread) + ", seed=" + std::to_string(seed) + ")";
  return out;
}

PartitionerKind partitioner_from_name(const std::string& name) {
  if (name == "round-robin") return PartitionerKind::RoundRobin;
  if (name == "random") return PartitionerKind::Random;
  if (name == "sorted-skew") return PartitionerKind::SortedSkew;
  throw std::invalid_argument("unknown partitioner '" + name +
                              "' (expected round-robin, random, or sorted-skew)");
}

std::string partitioner_name(PartitionerKind kind) {
  switch (kind) {
    case PartitionerKind::RoundRobin:
      return "round-robin";
    case PartitionerKind::Random:
      return "random";
    case PartitionerKind::SortedSkew:
      return "sorted-skew";
  }
  throw std::logic_error("unreachable partitioner kind");
}

Partition partition_dataset(const std::vector<Point>& points, int machines,
                            PartitionerKind kind, std::uint64_t seed) {
  if (machines < 1) throw std::invalid_argument("partition: machines must be >= 1");
  if (points.empty()) throw std::invalid_argument("partition: no points");
  const std::size_t n = points.size();
  const auto m = static_cast<std::size_t>(machines);
  Partition parts(m);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  switch (kind) {
    case PartitionerKind::RoundRobin:
      for (std::size_t i = 0; i < n; ++i) parts[i % m].push_back(points[i]);
      return parts;
    case PartitionerKind::Random: {
      auto rng = rng_for_stream(seed, 0x9a27);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const std::size_t span = n - j;
        std::size_t off = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(span));
        if (off >= span) off = span - 1;
        std::swap(order[j], order[j + off]);
      }
      break;
    }
    case PartitionerKind::SortedSkew:
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return points[a].coords[0] < points[b].coords[0];
      });
      break;
  }

  // Near-equal contiguous shards over `order`; the first n mod m get one more.
  const std::size_t base = n / m;
  const std::size_t extra = n % m;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t take = base + (i < extra ? 1 : 0);
    for (std::size_t j = 0; j < take; ++j) parts[i].push_back(points[order[cursor++]]);
  }
  return parts;
}

}  // namespace distclust
