#include "hpref/drivers.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#include "hpref/random.hpp"

namespace hpref {

Clustering dbscan(const Dataset& data, const DbscanParams& params) {
  if (!(params.eps > 0.0)) throw std::invalid_argument("DBSCAN eps must be positive");
  if (params.min_pts < 1) throw std::invalid_argument("DBSCAN min_pts must be at least 1");

  const std::size_t N = data.size();
  const double eps2 = params.eps * params.eps;
  std::vector<std::vector<std::size_t>> neighbours(N);
  for (std::size_t i = 0; i < N; ++i) {
    neighbours[i].push_back(i);
    for (std::size_t j = i + 1; j < N; ++j) {
      if (data.squared_distance(i, j) <= eps2) {
        neighbours[i].push_back(j);
        neighbours[j].push_back(i);
      }
    }
  }
  std::vector<bool> core(N);
  for (std::size_t i = 0; i < N; ++i) core[i] = neighbours[i].size() >= params.min_pts;

  constexpr std::uint32_t kUnassigned = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(N, kUnassigned);
  std::uint32_t next = 0;
  std::vector<std::size_t> frontier;
  for (std::size_t seed = 0; seed < N; ++seed) {
    if (!core[seed] || label[seed] != kUnassigned) continue;
    label[seed] = next;
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      const std::size_t p = frontier.back();
      frontier.pop_back();
      for (auto q : neighbours[p]) {
        if (label[q] != kUnassigned) continue;
        label[q] = next;
        if (core[q]) frontier.push_back(q);
      }
    }
    ++next;
  }

  std::vector<ClusterLabel> out(N, ClusterLabel::noise());
  for (std::size_t i = 0; i < N; ++i)
    if (label[i] != kUnassigned) out[i] = ClusterLabel::cluster(label[i]);
  return canonicalize(Clustering(std::move(out),
                                 {{"algorithm", "dbscan"},
                                  {"eps", format_double(params.eps)},
                                  {"min_pts", std::to_string(params.min_pts)}}));
}

namespace {

double squared_distance_to(const Dataset& data, std::size_t i, const std::vector<double>& center) {
  const double* p = data.point(i);
  double acc = 0.0;
  for (std::size_t k = 0; k < center.size(); ++k) {
    const double d = p[k] - center[k];
    acc += d * d;
  }
  return acc;
}

// Index of the nearest center (lowest index on ties) and its squared distance.
std::pair<std::size_t, double> nearest(const Dataset& data, std::size_t i,
                                       const std::vector<std::vector<double>>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance_to(data, i, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

std::vector<double> point_vector(const Dataset& data, std::size_t i) {
  return {data.point(i), data.point(i) + data.dim()};
}

void check_k(const Dataset& data, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k > data.size())
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " + std::to_string(data.size()) +
                                " data points");
}

}  // namespace

double kmeans_objective(const Dataset& data, const std::vector<std::vector<double>>& centers) {
  if (centers.empty()) throw std::invalid_argument("no centers");
  double phi = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) phi += nearest(data, i, centers).second;
  return phi;
}

std::vector<std::size_t> uniform_init(const Dataset& data, std::size_t k, std::uint64_t seed) {
  check_k(data, k);
  Rng rng(seed);
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + uniform_below(rng, idx.size() - i)]);
  idx.resize(k);
  return idx;
}

std::vector<std::size_t> plusplus_init(const Dataset& data, std::size_t k, std::uint64_t seed) {
  check_k(data, k);
  Rng rng(seed);
  const std::size_t N = data.size();
  std::vector<std::size_t> chosen{static_cast<std::size_t>(uniform_below(rng, N))};
  std::vector<bool> taken(N, false);
  taken[chosen[0]] = true;
  std::vector<double> d2(N);
  for (std::size_t i = 0; i < N; ++i) d2[i] = data.squared_distance(i, chosen[0]);

  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < N; ++i) total += d2[i];
    std::size_t pick = N;
    if (total > 0.0) {
      const double target = uniform_unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick == N)  // rounding at the top end of the cumulative sum
        for (std::size_t i = N; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
    } else {
      // Every point coincides with a chosen center: fall back to a uniform
      // pick among the indices not yet taken.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < N; ++i)
        if (!taken[i]) free.push_back(i);
      pick = free[uniform_below(rng, free.size())];
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < N; ++i) d2[i] = std::min(d2[i], data.squared_distance(i, pick));
  }
  return chosen;
}

KmeansResult lloyd(const Dataset& data, const KmeansParams& params) {
  check_k(data, params.k);
  const std::size_t N = data.size();
  const std::size_t dim = data.dim();
  const std::size_t k = params.k;

  const auto seeds = params.init == KmeansInit::PlusPlus ? plusplus_init(data, k, params.seed)
                                                         : uniform_init(data, k, params.seed);
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  for (auto i : seeds) centers.push_back(point_vector(data, i));

  KmeansResult result;
  std::vector<std::size_t> assign(N);
  std::vector<double> dist(N);
  std::size_t iter = 0;
  while (iter < params.max_iterations) {
    ++iter;
    double phi = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      auto [c, d] = nearest(data, i, centers);
      assign[i] = c;
      dist[i] = d;
      phi += d;
    }

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < N; ++i) {
      ++counts[assign[i]];
      const double* p = data.point(i);
      for (std::size_t j = 0; j < dim; ++j) sums[assign[i]][j] += p[j];
    }

    // Empty clusters take the point farthest from its current center.
    std::vector<bool> used(N, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = N;
      for (std::size_t i = 0; i < N; ++i)
        if (!used[i] && (far == N || dist[i] > dist[far])) far = i;
      used[far] = true;
      phi -= dist[far];
      dist[far] = 0.0;
      sums[c] = point_vector(data, far);
      counts[c] = 1;
    }
    result.phi_history.push_back(phi);

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double v = sums[c][j] / static_cast<double>(counts[c]);
        const double delta = v - centers[c][j];
        shift += delta * delta;
        centers[c][j] = v;
      }
    }
    if (shift < params.tolerance) break;
  }

  std::vector<ClusterLabel> labels(N, ClusterLabel::noise());
  double phi = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    auto [c, d] = nearest(data, i, centers);
    labels[i] = ClusterLabel::cluster(static_cast<std::uint32_t>(c));
    phi += d;
  }
  result.centers = std::move(centers);
  result.phi = phi;
  result.iterations = iter;
  result.clustering = canonicalize(Clustering(
      std::move(labels),
      {{"algorithm", params.init == KmeansInit::PlusPlus ? "k-means++" : "k-means"},
       {"k", std::to_string(k)},
       {"seed", std::to_string(params.seed)},
       {"phi", format_double(phi)},
       {"iterations", std::to_string(iter)}}));
  return result;
}

std::size_t GridSpec::size() const {
  std::size_t n = 0;
  if (dbscan) n += dbscan->eps.size() * dbscan->min_pts.size();
  if (kmeans) n += kmeans->uniform_runs + kmeans->plusplus_runs;
  return n;
}

GridSpec iris_grid() {
  GridSpec::Dbscan g;
  for (int i = 1; i <= 20; ++i) g.eps.push_back(i / 20.0);
  for (std::size_t k = 1; k <= 10; ++k) g.min_pts.push_back(k);
  GridSpec spec;
  spec.dbscan = std::move(g);
  return spec;
}

std::uint64_t kmeans_run_seed(std::uint64_t base, KmeansInit init, std::size_t run) {
  return derive_seed(base, 2 * run + (init == KmeansInit::PlusPlus ? 1 : 0));
}

ClusteringSet run_grid(const Dataset& data, const GridSpec& spec, unsigned workers) {
  if (spec.size() == 0) throw std::invalid_argument("grid specification has no cells");

  std::vector<std::function<Clustering()>> cells;
  if (spec.dbscan) {
    for (double eps : spec.dbscan->eps)
      for (auto m : spec.dbscan->min_pts)
        cells.emplace_back([&data, eps, m] { return dbscan(data, {eps, m}); });
  }
  if (spec.kmeans) {
    const auto& km = *spec.kmeans;
    auto add = [&](KmeansInit init, std::size_t runs) {
      for (std::size_t r = 0; r < runs; ++r) {
        KmeansParams p{km.k, init, kmeans_run_seed(km.seed, init, r), km.max_iterations, km.tolerance};
        cells.emplace_back([&data, p, r] {
          auto res = lloyd(data, p);
          Provenance prov = res.clustering.provenance();
          prov["run"] = std::to_string(r);
          return Clustering(res.clustering.labels(), std::move(prov));
        });
      }
    };
    add(KmeansInit::Uniform, km.uniform_runs);
    add(KmeansInit::PlusPlus, km.plusplus_runs);
  }

  std::vector<std::optional<Clustering>> results(cells.size());
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) results[c] = cells[c]();
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t c = cursor++; c < cells.size(); c = cursor++) results[c] = cells[c]();
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<Clustering> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return ClusteringSet(data.size(), std::move(out));
}

}  // namespace hpref
