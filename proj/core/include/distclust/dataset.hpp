#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "distclust/dist_kzc.hpp"
#include "distclust/point.hpp"

namespace distclust {

// A named numeric table. Rows are points; the provenance note records where
// the data came from and what was done to it.
struct Dataset {
  std::string name;
  std::vector<Point> rows;
  std::string provenance;

  std::size_t size() const { return rows.size(); }
  std::size_t dim() const { return rows.empty() ? 0 : rows[0].dim(); }
};

// CSV ingestion. Rows and columns in error messages are 1-based positions in
// the physical file (header and dropped columns included), so a reported
// cell can be found with a text editor. drop_columns uses the same 1-based
// original column numbers.
struct CsvOptions {
  char delimiter = ',';
  bool skip_header = false;
  std::vector<std::size_t> drop_columns;
};

Dataset ingest_csv(const std::string& path, const CsvOptions& options = {});

// `count` uniform points in the box obtained by scaling the data bounding
// box about its center by `spread` per axis, appended and noted in the
// provenance. count = 0 returns the dataset unchanged.
Dataset add_synthetic_outliers(const Dataset& dataset, std::size_t count, double spread,
                               std::uint64_t seed);

// How rows are spread across machines:
//  - RoundRobin: row i goes to machine i mod m.
//  - Random:     seeded shuffle, then near-equal contiguous shards.
//  - SortedSkew: sort by first coordinate, then contiguous shards (stresses
//                non-IID splits).
enum class PartitionerKind { RoundRobin, Random, SortedSkew };

PartitionerKind partitioner_from_name(const std::string& name);  // "round-robin" etc.
std::string partitioner_name(PartitionerKind kind);

Partition partition_dataset(const std::vector<Point>& points, int machines,
                            PartitionerKind kind, std::uint64_t seed);

}  // namespace distclust
