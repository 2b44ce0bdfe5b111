#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hpref {

/// Key/value metadata describing how a clustering was produced
/// (algorithm name, parameters, seed, objective value). Never interpreted
/// by the algorithm itself.
using Provenance = std::map<std::string, std::string>;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// A point set X: N points of a common dimension d.
class Dataset {
 public:
  explicit Dataset(std::vector<std::vector<double>> points,
                   std::vector<std::string> ids = {});

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }

  const double* point(std::size_t i) const { return coords_.data() + i * dim_; }
  double coord(std::size_t i, std::size_t k) const { return coords_[i * dim_ + k]; }
  const std::vector<std::string>& ids() const { return ids_; }

  double squared_distance(std::size_t i, std::size_t j) const;

 private:
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;  // row-major N x d
  std::vector<std::string> ids_;
};

/// Cluster id or the distinguished NOISE marker. Noise is a state of its
/// own and never compares equal to any cluster id.
class ClusterLabel {
 public:
  static constexpr ClusterLabel noise() { return ClusterLabel(kNoise); }
  static constexpr ClusterLabel cluster(std::uint32_t id) { return ClusterLabel(id); }

  /// On-disk convention: -1 is noise, anything >= 0 a cluster id.
  static ClusterLabel from_int(std::int64_t raw);
  std::int64_t to_int() const { return is_noise() ? -1 : static_cast<std::int64_t>(value_); }

  constexpr bool is_noise() const { return value_ == kNoise; }
  constexpr std::uint32_t id() const { return value_; }

  friend constexpr bool operator==(ClusterLabel, ClusterLabel) = default;

 private:
  static constexpr std::uint32_t kNoise = 0xFFFFFFFFu;
  constexpr explicit ClusterLabel(std::uint32_t v) : value_(v) {}
  std::uint32_t value_;
};

/// One clustering of a dataset: a label per point. Immutable.
class Clustering {
 public:
  Clustering(std::vector<ClusterLabel> labels, Provenance provenance = {});

  /// Build from integer labels where -1 marks noise.
  static Clustering from_ints(const std::vector<std::int64_t>& labels, Provenance provenance = {});

  std::size_t size() const { return labels_.size(); }
  ClusterLabel label(std::size_t i) const { return labels_.at(i); }
  const std::vector<ClusterLabel>& labels() const { return labels_; }
  const Provenance& provenance() const { return provenance_; }

  /// Number of distinct non-noise cluster ids.
  std::size_t cluster_count() const;
  std::size_t noise_count() const;
  bool is_canonical() const;

  std::vector<std::int64_t> to_ints() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<ClusterLabel> labels_;
  Provenance provenance_;
};

/// Renumber non-noise labels to 0..K-1 in order of first appearance.
Clustering canonicalize(const Clustering& c);

/// The pair encoding: 0 iff points i and j are in the same (non-noise)
/// cluster. On the diagonal this is 0 for clustered points and 1 for noise,
/// so a singleton cluster and a noise point are told apart.
int pair_feature(const Clustering& c, std::size_t i, std::size_t j);

/// Ordered set of clusterings over one dataset of size N. Row order is the
/// row order of the feature matrix.
class ClusteringSet {
 public:
  ClusteringSet(std::size_t dataset_size, std::vector<Clustering> clusterings);

  std::size_t dataset_size() const { return dataset_size_; }
  std::size_t size() const { return clusterings_.size(); }
  const Clustering& operator[](std::size_t r) const { return clusterings_[r]; }
  const std::vector<Clustering>& clusterings() const { return clusterings_; }

  auto begin() const { return clusterings_.begin(); }
  auto end() const { return clusterings_.end(); }

  /// Display name of row r: provenance "name" if present, else the index.
  std::string name(std::size_t r) const;

  friend bool operator==(const ClusteringSet&, const ClusteringSet&) = default;

 private:
  std::size_t dataset_size_;
  std::vector<Clustering> clusterings_;
};

}  // namespace hpref
