#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpref/clustering.hpp"
#include "hpref/feature_matrix.hpp"

namespace hpref {

/// How the columns of the matrix behind a dendrogram were chosen.
struct SampleDescriptor {
  SampleMode mode = SampleMode::Unspecified;
  std::size_t pairs = 0;
  std::size_t requested = 0;
  std::uint64_t seed = 0;
  bool include_diagonal = true;
  std::size_t dataset_size = 0;

  static SampleDescriptor of(const PairSample& ps);
  friend bool operator==(const SampleDescriptor&, const SampleDescriptor&) = default;
};

struct NodeSplit {
  BitPattern pattern;  // over the parent's members; 0 -> left, 1 -> right
  std::size_t multiplicity = 0;
  std::vector<std::size_t> witness_columns;
  std::vector<PointPair> witness_pairs;  // empty when the matrix has no pair list
  std::size_t left = 0;
  std::size_t right = 0;

  friend bool operator==(const NodeSplit&, const NodeSplit&) = default;
};

struct HprefNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> members;  // sorted row indices
  double score = 0.0;
  std::size_t nonconstant = 0;  // c on the restricted matrix
  std::size_t top_multiplicity = 0;  // m on the restricted matrix
  std::size_t creation_event = 0;  // 0 for the root
  std::optional<NodeSplit> split;
  double weight = 0.0;

  bool is_leaf() const { return !split.has_value(); }
  friend bool operator==(const HprefNode&, const HprefNode&) = default;
};

struct SplitEvent {
  std::size_t index = 0;  // 1-based; equals the creation_event of the children
  std::size_t node = 0;
  double score = 0.0;
  BitPattern pattern;
  std::size_t multiplicity = 0;

  friend bool operator==(const SplitEvent&, const SplitEvent&) = default;
};

using Partition = std::vector<std::vector<std::size_t>>;

/// Output of HPREF: a binary hierarchical partition of the rows, the split
/// events in order and (after assign_weights) monotone node weights.
struct Dendrogram {
  std::vector<HprefNode> nodes;  // nodes[0] is the root; ids are indices
  std::vector<SplitEvent> events;
  std::vector<std::string> row_names;
  SampleDescriptor sample;
  std::size_t max_leaves = 0;
  bool weighted = false;

  const HprefNode& root() const { return nodes.front(); }
  std::size_t row_count() const { return root().members.size(); }
  /// Node ids in depth-first order, left (zero class) first.
  std::vector<std::size_t> preorder() const;
  /// Leaf ids left to right.
  std::vector<std::size_t> leaves() const;
  std::size_t leaf_count() const { return leaves().size(); }
  std::vector<std::size_t> multiplicities() const;

  /// Structural invariants; throws std::logic_error describing the first
  /// violation.
  void validate() const;

  friend bool operator==(const Dendrogram&, const Dendrogram&) = default;
};

/// Scores a set of rows from its column grouping.
using ScoringFunction = std::function<double(const ColumnGroups&)>;

/// f = c + m, with m = 0 when there is no non-constant column.
double score(const ColumnGroups& groups);

struct PairSampling {
  std::optional<std::size_t> pairs;  // nullopt = all pairs
  std::uint64_t seed = 0;
  bool include_diagonal = true;
};

struct HprefConfig {
  std::size_t max_leaves = 1;
  PairSampling sampling;  // used only when starting from clusterings
  ScoringFunction scoring = score;
  unsigned workers = 1;
};

/// Grow the tree: repeatedly split the highest-scoring splittable leaf by
/// the most repeated non-constant column of its restricted matrix, until
/// max_leaves leaves exist or no leaf can be split. Leaf-score ties go to
/// the earliest-created leaf, then to the left sibling.
Dendrogram run_hpref(const FeatureMatrix& fm, const HprefConfig& cfg,
                     std::vector<std::string> row_names = {});

/// Samples pairs per cfg.sampling, builds the matrix and runs HPREF.
Dendrogram run_hpref(const ClusteringSet& set, const HprefConfig& cfg);

/// weight(node) = score(node) + sum of scores of nodes created by strictly
/// later split events. Both children of one split share their event.
Dendrogram assign_weights(Dendrogram d);

/// Distances between rows: the weight of the lowest node holding both.
class Ultrametric {
 public:
  explicit Ultrametric(std::size_t n) : n_(n), d_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }
  const std::vector<double>& data() const { return d_; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

Ultrametric induced_metric(const Dendrogram& d);

/// Classes present after the first k-1 split events, in left-to-right order.
Partition cut(const Dendrogram& d, std::size_t k);

/// The leaves' member sets, left to right (the whole set for a lone root).
Partition leaf_partition(const Dendrogram& d);

/// Sorted classes, classes ordered by smallest member; for comparing
/// partitions irrespective of ordering.
Partition normalized(Partition p);

}  // namespace hpref
