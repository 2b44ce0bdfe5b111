#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hpref/clustering.hpp"

namespace hpref {

struct DbscanParams {
  double eps = 0.5;         // closed Euclidean ball radius
  std::size_t min_pts = 5;  // neighbourhood size needed for a core point, the point itself included
};

/// DBSCAN with Euclidean distance. Clusters are grown from core points in
/// ascending index order; a border point joins the first cluster that
/// reaches it. Output is canonical.
Clustering dbscan(const Dataset& data, const DbscanParams& params);

enum class KmeansInit { Uniform, PlusPlus };

struct KmeansParams {
  std::size_t k = 1;
  KmeansInit init = KmeansInit::PlusPlus;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 300;
  double tolerance = 1e-4;  // on the total squared center movement
};

struct KmeansResult {
  Clustering clustering{std::vector<ClusterLabel>{}};
  std::vector<std::vector<double>> centers;
  double phi = 0.0;
  std::size_t iterations = 0;
  std::vector<double> phi_history;  // objective after each assignment step
};

/// Sum over points of the squared distance to the nearest center.
double kmeans_objective(const Dataset& data, const std::vector<std::vector<double>>& centers);

/// k-means++ seeding: first center uniform, each further center drawn with
/// probability proportional to the squared distance to the nearest chosen
/// center. Returns the chosen point indices.
std::vector<std::size_t> plusplus_init(const Dataset& data, std::size_t k, std::uint64_t seed);

/// k distinct points drawn uniformly.
std::vector<std::size_t> uniform_init(const Dataset& data, std::size_t k, std::uint64_t seed);

/// Lloyd's algorithm. An emptied cluster is re-seeded at the point farthest
/// from its assigned center.
KmeansResult lloyd(const Dataset& data, const KmeansParams& params);

/// A DBSCAN parameter grid and/or batches of k-means runs.
struct GridSpec {
  struct Dbscan {
    std::vector<double> eps;
    std::vector<std::size_t> min_pts;
  };
  struct Kmeans {
    std::size_t k = 1;
    std::size_t uniform_runs = 0;
    std::size_t plusplus_runs = 0;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 300;
    double tolerance = 1e-4;
  };
  std::optional<Dbscan> dbscan;
  std::optional<Kmeans> kmeans;

  std::size_t size() const;
};

/// The grid used for Iris: eps = 0.05 i (i = 1..20) by min_pts = 1..10.
GridSpec iris_grid();

/// Run every cell: DBSCAN eps-major then min_pts, followed by the uniform
/// k-means runs and then the k-means++ runs. Each clustering carries its
/// parameters (and phi for k-means) as provenance.
ClusteringSet run_grid(const Dataset& data, const GridSpec& spec, unsigned workers = 1);

/// Per-run seed of the r-th run in a k-means batch.
std::uint64_t kmeans_run_seed(std::uint64_t base, KmeansInit init, std::size_t run);

}  // namespace hpref
