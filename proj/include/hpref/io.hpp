#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpref/analysis.hpp"
#include "hpref/clustering.hpp"
#include "hpref/drivers.hpp"
#include "hpref/hpref.hpp"

namespace hpref::io {

/// Malformed input. line() is 1-based, 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Clustering-set files:
//
//   hpref-clusterings 1
//   N <points> S <clusterings>
//   @ {"algorithm":"dbscan","eps":"0.4","min_pts":"1"}
//   0 0 1 -1 ...
//
// One provenance line (a JSON object of strings, keys sorted) followed by
// one line of N integer labels per clustering; -1 is noise.
void write_clusterings(const ClusteringSet& set, std::ostream& out);
void write_clusterings(const ClusteringSet& set, const std::string& path);
ClusteringSet read_clusterings(std::istream& in, const std::string& source = "<stream>");
ClusteringSet read_clusterings(const std::string& path);

/// CSV, one point per line. A first line without numeric fields is a
/// header; columns that are non-numeric in the first data row (such as
/// class names) are skipped.
Dataset read_dataset_csv(const std::string& path);

/// Ground-truth labels: tokens separated by whitespace or commas. Integer
/// tokens are used as-is (-1 is noise); otherwise distinct strings are
/// numbered by first appearance.
Clustering read_labels(const std::string& path);

/// DBSCAN grid and/or k-means batches as JSON:
///   {"dbscan": {"eps": [..] | {"start": a, "step": b, "count": n}, "min_pts": [..]},
///    "kmeans": {"k": 25, "uniform_runs": 20, "plusplus_runs": 20, "seed": 1,
///               "max_iterations": 300, "tolerance": 1e-4}}
GridSpec parse_grid_spec(const std::string& json_text, const std::string& source = "<grid>");
GridSpec read_grid_spec(const std::string& path);

/// Canonical JSON document for a dendrogram (sorted keys, two-space indent).
std::string dendrogram_to_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const std::string& text, const std::string& source = "<json>");
void write_dendrogram(const Dendrogram& d, const std::string& path);
Dendrogram read_dendrogram(const std::string& path);

/// Newick with each node's weight as a [&weight=w] annotation and branch
/// lengths equal to the weight drop from the parent. Leaf labels list the
/// member names joined by '|'.
std::string dendrogram_to_newick(const Dendrogram& d);

/// Dendrogram drawing: vertical axis is weight, leaves spread left to right.
/// A coloring, if given, must be one of the dendrogram's cuts.
std::string render_dendrogram_svg(const Dendrogram& d, const std::optional<Partition>& coloring = std::nullopt);

/// CSV: class,size,statistic,mean,min,max,std (std empty for singletons).
std::string class_stats_csv(const std::vector<ClassStats>& stats);

/// CSV: row,class,name followed by the row's provenance as key=value pairs.
std::string partition_csv(const Partition& p, const ClusteringSet* set = nullptr);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace hpref::io
