#include "hpref/analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace hpref {

std::string to_string(NoiseHandling h) {
  return h == NoiseHandling::Singletons ? "singletons" : "cluster";
}

NoiseHandling noise_handling_from_string(const std::string& s) {
  if (s == "singletons" || s == "singleton") return NoiseHandling::Singletons;
  if (s == "cluster") return NoiseHandling::SingleCluster;
  throw std::invalid_argument("unknown noise handling '" + s + "' (expected singletons or cluster)");
}

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

// Dense ids with noise resolved per the policy.
std::vector<std::uint64_t> resolve_noise(const Clustering& c, NoiseHandling noise) {
  const std::uint64_t base = std::uint64_t{1} << 32;
  std::vector<std::uint64_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const ClusterLabel l = c.labels()[i];
    if (!l.is_noise())
      out[i] = l.id();
    else
      out[i] = noise == NoiseHandling::Singletons ? base + i : base - 1;
  }
  return out;
}

}  // namespace

double adjusted_rand(const Clustering& a, const Clustering& b, NoiseHandling noise) {
  if (a.size() != b.size())
    throw std::invalid_argument("clusterings label " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()) + " points");
  const auto la = resolve_noise(a, noise);
  const auto lb = resolve_noise(b, noise);

  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> table;
  std::unordered_map<std::uint64_t, std::size_t> rows;
  std::unordered_map<std::uint64_t, std::size_t> cols;
  for (std::size_t i = 0; i < la.size(); ++i) {
    ++table[{la[i], lb[i]}];
    ++rows[la[i]];
    ++cols[lb[i]];
  }
  double index = 0.0;
  for (const auto& [key, n] : table) index += choose2(static_cast<double>(n));
  double sum_a = 0.0;
  for (const auto& [key, n] : rows) sum_a += choose2(static_cast<double>(n));
  double sum_b = 0.0;
  for (const auto& [key, n] : cols) sum_b += choose2(static_cast<double>(n));

  const double total = choose2(static_cast<double>(la.size()));
  if (total == 0.0) return 1.0;
  const double expected = sum_a * sum_b / total;
  const double maximum = (sum_a + sum_b) / 2.0;
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

std::vector<ClassStats> class_stats(const Partition& classes, const std::vector<double>& values,
                                    const std::string& statistic) {
  std::vector<ClassStats> out;
  out.reserve(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& members = classes[k];
    if (members.empty()) throw std::invalid_argument("class " + std::to_string(k) + " is empty");
    ClassStats st;
    st.class_id = k;
    st.count = members.size();
    st.statistic = statistic;
    st.min = st.max = values.at(members.front());
    double sum = 0.0;
    for (auto m : members) {
      const double v = values.at(m);
      sum += v;
      st.min = std::min(st.min, v);
      st.max = std::max(st.max, v);
    }
    st.mean = sum / static_cast<double>(members.size());
    if (members.size() > 1) {
      double ss = 0.0;
      for (auto m : members) ss += (values[m] - st.mean) * (values[m] - st.mean);
      st.stddev = std::sqrt(ss / static_cast<double>(members.size()));
    }
    out.push_back(st);
  }
  return out;
}

PcaProjection pca2(const FeatureMatrix& fm, Centering centering) {
  const std::size_t s = fm.rows();
  if (s < 2) throw std::invalid_argument("PCA needs at least two rows");

  // Row-major packed copy so Gram entries are popcounts of row intersections.
  const std::size_t n = fm.cols();
  const std::size_t W = (n + 63) / 64;
  std::vector<std::uint64_t> rows(s * W, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < s; ++r)
      if (fm.bit(r, c)) rows[r * W + c / 64] |= std::uint64_t{1} << (c % 64);

  Eigen::MatrixXd gram(s, s);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a; b < s; ++b) {
      std::size_t dot = 0;
      for (std::size_t w = 0; w < W; ++w) dot += std::popcount(rows[a * W + w] & rows[b * W + w]);
      gram(a, b) = gram(b, a) = static_cast<double>(dot);
    }
  }
  const Eigen::MatrixXd H =
      Eigen::MatrixXd::Identity(s, s) - Eigen::MatrixXd::Constant(s, s, 1.0 / static_cast<double>(s));
  const Eigen::MatrixXd centered = H * gram * H;
  const double total = centered.trace();  // s times the summed column variances

  PcaProjection out;
  out.centering = centering;
  out.projections.assign(s, {0.0, 0.0});
  const double tiny = 1e-12 * std::max(1.0, gram.trace());
  if (total <= tiny) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centering == Centering::Centered ? centered : gram);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  const auto& values = eig.eigenvalues();  // ascending
  const auto& vectors = eig.eigenvectors();

  for (int comp = 0; comp < 2; ++comp) {
    const Eigen::Index idx = static_cast<Eigen::Index>(s) - 1 - comp;
    const double lambda = std::max(0.0, values(idx));
    Eigen::VectorXd proj = vectors.col(idx) * std::sqrt(lambda);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < proj.size(); ++i)
      if (std::abs(proj(i)) > std::abs(proj(arg)) + 1e-12) arg = i;
    if (proj(arg) < 0) proj = -proj;
    for (std::size_t r = 0; r < s; ++r) out.projections[r][comp] = proj(static_cast<Eigen::Index>(r));

    // Variance of the projected coordinate over the total variance.
    const double mean = proj.mean();
    const double var_sum = (proj.array() - mean).square().sum();
    out.explained_ratio[comp] = var_sum / total;
  }
  return out;
}

}  // namespace hpref
