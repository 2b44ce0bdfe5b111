#include "hpref/clustering.hpp"

#include <charconv>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hpref {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Dataset::Dataset(std::vector<std::vector<double>> points, std::vector<std::string> ids)
    : size_(points.size()), ids_(std::move(ids)) {
  if (points.empty()) throw std::invalid_argument("dataset must contain at least one point");
  dim_ = points.front().size();
  if (dim_ == 0) throw std::invalid_argument("dataset points must have dimension >= 1");
  coords_.reserve(size_ * dim_);
  for (std::size_t i = 0; i < size_; ++i) {
    if (points[i].size() != dim_)
      throw std::invalid_argument("point " + std::to_string(i) + " has dimension " +
                                  std::to_string(points[i].size()) + ", expected " +
                                  std::to_string(dim_));
    coords_.insert(coords_.end(), points[i].begin(), points[i].end());
  }
  if (!ids_.empty()) {
    if (ids_.size() != size_) throw std::invalid_argument("identifier count does not match point count");
    std::unordered_set<std::string> seen;
    for (const auto& id : ids_)
      if (!seen.insert(id).second) throw std::invalid_argument("duplicate point identifier '" + id + "'");
  }
}

double Dataset::squared_distance(std::size_t i, std::size_t j) const {
  const double* a = point(i);
  const double* b = point(j);
  double acc = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

ClusterLabel ClusterLabel::from_int(std::int64_t raw) {
  if (raw == -1) return noise();
  if (raw < 0 || raw >= static_cast<std::int64_t>(kNoise))
    throw std::invalid_argument("label " + std::to_string(raw) + " out of range");
  return cluster(static_cast<std::uint32_t>(raw));
}

Clustering::Clustering(std::vector<ClusterLabel> labels, Provenance provenance)
    : labels_(std::move(labels)), provenance_(std::move(provenance)) {}

Clustering Clustering::from_ints(const std::vector<std::int64_t>& labels, Provenance provenance) {
  std::vector<ClusterLabel> out;
  out.reserve(labels.size());
  for (auto v : labels) out.push_back(ClusterLabel::from_int(v));
  return Clustering(std::move(out), std::move(provenance));
}

std::size_t Clustering::cluster_count() const {
  std::unordered_set<std::uint32_t> ids;
  for (auto l : labels_)
    if (!l.is_noise()) ids.insert(l.id());
  return ids.size();
}

std::size_t Clustering::noise_count() const {
  std::size_t n = 0;
  for (auto l : labels_) n += l.is_noise() ? 1 : 0;
  return n;
}

bool Clustering::is_canonical() const {
  std::uint32_t next = 0;
  for (auto l : labels_) {
    if (l.is_noise()) continue;
    if (l.id() > next) return false;
    if (l.id() == next) ++next;
  }
  return true;
}

std::vector<std::int64_t> Clustering::to_ints() const {
  std::vector<std::int64_t> out;
  out.reserve(labels_.size());
  for (auto l : labels_) out.push_back(l.to_int());
  return out;
}

Clustering canonicalize(const Clustering& c) {
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::vector<ClusterLabel> out;
  out.reserve(c.size());
  for (auto l : c.labels()) {
    if (l.is_noise()) {
      out.push_back(l);
      continue;
    }
    auto [it, inserted] = remap.try_emplace(l.id(), static_cast<std::uint32_t>(remap.size()));
    out.push_back(ClusterLabel::cluster(it->second));
  }
  return Clustering(std::move(out), c.provenance());
}

int pair_feature(const Clustering& c, std::size_t i, std::size_t j) {
  if (i >= c.size() || j >= c.size())
    throw std::out_of_range("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside a clustering of " + std::to_string(c.size()) + " points");
  const ClusterLabel a = c.labels()[i];
  const ClusterLabel b = c.labels()[j];
  return (!a.is_noise() && a == b) ? 0 : 1;
}

ClusteringSet::ClusteringSet(std::size_t dataset_size, std::vector<Clustering> clusterings)
    : dataset_size_(dataset_size) {
  if (dataset_size == 0) throw std::invalid_argument("clustering set needs a nonempty dataset");
  if (clusterings.empty()) throw std::invalid_argument("clustering set must contain at least one clustering");
  clusterings_.reserve(clusterings.size());
  for (std::size_t r = 0; r < clusterings.size(); ++r) {
    if (clusterings[r].size() != dataset_size)
      throw std::invalid_argument("clustering " + std::to_string(r) + " labels " +
                                  std::to_string(clusterings[r].size()) + " points, expected " +
                                  std::to_string(dataset_size));
    clusterings_.push_back(clusterings[r].is_canonical() ? std::move(clusterings[r])
                                                         : canonicalize(clusterings[r]));
  }
}

std::string ClusteringSet::name(std::size_t r) const {
  const auto& prov = clusterings_.at(r).provenance();
  if (auto it = prov.find("name"); it != prov.end()) return it->second;
  return std::to_string(r);
}

}  // namespace hpref
