#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hpref/clustering.hpp"
#include "hpref/feature_matrix.hpp"
#include "hpref/hpref.hpp"

namespace hpref {

/// How noise points enter the contingency table of the adjusted Rand index.
enum class NoiseHandling {
  Singletons,    // each noise point is its own one-point cluster
  SingleCluster  // all noise points of a clustering form one cluster
};

std::string to_string(NoiseHandling h);
NoiseHandling noise_handling_from_string(const std::string& s);

/// Hubert-Arabie adjusted Rand index. Returns 1 in the degenerate case
/// where the expected index equals the maximum index.
double adjusted_rand(const Clustering& a, const Clustering& b,
                     NoiseHandling noise = NoiseHandling::Singletons);

struct ClassStats {
  std::size_t class_id = 0;
  std::size_t count = 0;
  std::string statistic;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::optional<double> stddev;  // population; absent for a single member
};

/// Summary statistics of values[member] for every class, in partition order.
std::vector<ClassStats> class_stats(const Partition& classes, const std::vector<double>& values,
                                    const std::string& statistic = "value");

enum class Centering {
  Centered,   // principal component analysis
  Uncentered  // truncated SVD of the raw rows; ratios against the centered total variance
};

struct PcaProjection {
  std::vector<std::array<double, 2>> projections;  // one row per matrix row
  std::array<double, 2> explained_ratio{0.0, 0.0};
  Centering centering = Centering::Centered;

  double explained_total() const { return explained_ratio[0] + explained_ratio[1]; }
};

/// Two-component projection of the rows of the feature matrix, computed from
/// an eigendecomposition of the s x s Gram matrix. Sign convention: each
/// component's entry of largest magnitude is positive.
PcaProjection pca2(const FeatureMatrix& fm, Centering centering = Centering::Centered);

}  // namespace hpref
