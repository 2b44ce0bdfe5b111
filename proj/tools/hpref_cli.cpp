#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hpref/analysis.hpp"
#include "hpref/drivers.hpp"
#include "hpref/hpref.hpp"
#include "hpref/io.hpp"
#include "hpref/presets.hpp"
#include "hpref/random.hpp"

namespace {

using namespace hpref;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kIo = 2;
constexpr int kUnstable = 3;

constexpr std::uint64_t kAutoFullLimit = 1'000'000;
constexpr std::size_t kAutoSampleSize = 20'000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string preset;
  std::string grid;
  std::string svg;
  std::string newick;
  std::string pca_output;
  std::string clusterings;
  std::string labels;
  std::string stats_output;
  std::string statistic;
  std::string ari_noise = "singletons";
  std::string pairs = "auto";
  std::optional<std::uint64_t> seed;
  std::size_t max_leaves = 7;
  std::size_t cut = 0;
  std::size_t resamples = 100;
  double threshold = 0.5;
  bool include_diagonal = true;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  std::random_device rd;
  const std::uint64_t s = (std::uint64_t{rd()} << 32) ^ rd();
  std::cout << "seed: " << s << "\n";
  return s;
}

ClusteringSet load_set(const Options& o) {
  if (!o.input.empty() && !o.preset.empty()) throw UsageError("give either --input or --preset, not both");
  if (!o.input.empty()) return io::read_clusterings(o.input);
  if (!o.preset.empty()) {
    const auto p = presets::preset(o.preset);
    return run_grid(p.dataset, p.grid, o.workers);
  }
  throw UsageError("a clustering set is required (--input FILE or --preset NAME)");
}

// nullopt means every pair.
std::optional<std::size_t> resolve_pairs(const std::string& spec, std::size_t N, bool diag) {
  const std::uint64_t avail = available_pairs(N, diag);
  if (spec == "full") return std::nullopt;
  if (spec == "auto") {
    if (avail <= kAutoFullLimit) return std::nullopt;
    return kAutoSampleSize;
  }
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), n);
  if (ec != std::errc() || ptr != spec.data() + spec.size() || n == 0)
    throw UsageError("--pairs expects a positive integer or 'full', got '" + spec + "'");
  if (n >= avail) return std::nullopt;
  return n;
}

std::string with_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot) + ext;
  return path + ext;
}

void print_events(const Dendrogram& d) {
  std::cout << "events: " << d.events.size() << "\n";
  for (const auto& e : d.events) {
    const auto& split = *d.nodes[e.node].split;
    std::cout << "  " << e.index << ": node " << e.node << " score " << format_double(e.score) << " multiplicity "
              << e.multiplicity << " -> " << d.nodes[split.left].members.size() << " | "
              << d.nodes[split.right].members.size() << "\n";
  }
  std::cout << "multiplicities:";
  for (auto m : d.multiplicities()) std::cout << ' ' << m;
  std::cout << "\n";
}

int cmd_generate(const Options& o) {
  if (o.output.empty()) throw UsageError("generate needs --output");
  if (!o.input.empty() && !o.preset.empty()) throw UsageError("give either --input or --preset, not both");
  if (o.input.empty() && o.preset.empty())
    throw UsageError("generate needs --preset NAME or --input DATA.csv with --grid SPEC.json");
  std::optional<Dataset> data;
  GridSpec spec;
  if (!o.preset.empty()) {
    auto p = presets::preset(o.preset);
    data = std::move(p.dataset);
    spec = std::move(p.grid);
  } else {
    data = io::read_dataset_csv(o.input);
  }
  if (!o.grid.empty()) {
    try {
      spec = io::read_grid_spec(o.grid);
    } catch (const io::ParseError& e) {
      throw UsageError(std::string("invalid grid spec: ") + e.what());
    }
  }
  if (spec.size() == 0) throw UsageError("the grid is empty");
  const auto set = run_grid(*data, spec, o.workers);
  io::write_clusterings(set, o.output);
  std::cout << "points: " << set.dataset_size() << "\nclusterings: " << set.size() << "\nwrote " << o.output
            << "\n";
  return kOk;
}

int cmd_hpref(const Options& o) {
  if (o.output.empty()) throw UsageError("hpref needs --output");
  if (o.max_leaves < 1) throw UsageError("--max-leaves must be at least 1");
  const auto set = load_set(o);
  HprefConfig cfg;
  cfg.max_leaves = o.max_leaves;
  cfg.workers = o.workers;
  cfg.sampling.include_diagonal = o.include_diagonal;
  cfg.sampling.pairs = resolve_pairs(o.pairs, set.dataset_size(), o.include_diagonal);
  if (cfg.sampling.pairs) cfg.sampling.seed = resolve_seed(o);

  const Dendrogram d = assign_weights(run_hpref(set, cfg));
  std::cout << "clusterings: " << set.size() << "\npairs: " << d.sample.pairs << " (" << to_string(d.sample.mode)
            << ")\n";
  print_events(d);

  std::optional<Partition> coloring;
  if (o.cut) {
    if (o.cut < 2 || o.cut > d.leaf_count())
      throw UsageError("--cut must lie in 2.." + std::to_string(d.leaf_count()));
    coloring = cut(d, o.cut);
  }
  io::write_dendrogram(d, o.output);
  const std::string svg = o.svg.empty() ? with_extension(o.output, ".svg") : o.svg;
  io::write_text(svg, io::render_dendrogram_svg(d, coloring));
  std::cout << "wrote " << o.output << "\nwrote " << svg << "\n";
  if (!o.newick.empty()) {
    io::write_text(o.newick, io::dendrogram_to_newick(d));
    std::cout << "wrote " << o.newick << "\n";
  }
  if (!o.pca_output.empty()) {
    const auto fm = build_matrix(set, cfg.sampling.pairs
                                          ? sample_pairs(set.dataset_size(), *cfg.sampling.pairs,
                                                         cfg.sampling.seed, o.include_diagonal)
                                          : enumerate_pairs(set.dataset_size(), o.include_diagonal));
    const auto pca = pca2(fm, Centering::Uncentered);
    const auto centered = pca2(fm, Centering::Centered);
    std::ostringstream csv;
    csv << "row,name,pc1,pc2\n";
    for (std::size_t r = 0; r < set.size(); ++r)
      csv << r << ',' << set.name(r) << ',' << format_double(pca.projections[r][0]) << ','
          << format_double(pca.projections[r][1]) << '\n';
    io::write_text(o.pca_output, csv.str());
    std::cout << std::fixed << std::setprecision(3) << "pca explained (uncentered): " << pca.explained_total()
              << "\npca explained (centered): " << centered.explained_total() << "\n"
              << std::defaultfloat << "wrote " << o.pca_output << "\n";
  }
  return kOk;
}

std::optional<double> provenance_number(const Clustering& c, const std::string& key) {
  const auto it = c.provenance().find(key);
  if (it == c.provenance().end()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (ec != std::errc() || ptr != it->second.data() + it->second.size()) return std::nullopt;
  return v;
}

void print_stats(const std::vector<ClassStats>& stats) {
  std::cout << std::left << std::setw(7) << "class" << std::setw(7) << "size" << std::setw(10) << "mean"
            << std::setw(10) << "min" << std::setw(10) << "max" << "std\n";
  for (const auto& s : stats) {
    std::cout << std::setw(7) << s.class_id << std::setw(7) << s.count << std::fixed << std::setprecision(3)
              << std::setw(10) << s.mean << std::setw(10) << s.min << std::setw(10) << s.max
              << (s.stddev ? std::to_string(*s.stddev).substr(0, 5) : std::string("-")) << "\n"
              << std::defaultfloat;
  }
}

int cmd_cut(const Options& o) {
  if (o.input.empty()) throw UsageError("cut needs --input DENDROGRAM.json");
  if (o.cut == 0) throw UsageError("cut needs --cut K");
  const Dendrogram d = io::read_dendrogram(o.input);
  if (o.cut < 2 || o.cut > d.leaf_count())
    throw UsageError("--cut must lie in 2.." + std::to_string(d.leaf_count()) + " for this dendrogram");
  const Partition p = cut(d, o.cut);

  std::optional<ClusteringSet> set;
  if (!o.clusterings.empty()) {
    set = io::read_clusterings(o.clusterings);
    if (set->size() != d.row_count())
      throw UsageError("clustering set has " + std::to_string(set->size()) + " records, dendrogram has " +
                       std::to_string(d.row_count()) + " rows");
  }
  if ((!o.labels.empty() || !o.statistic.empty()) && !set)
    throw UsageError("--labels and --statistic need --clusterings SET");

  std::cout << "classes: " << p.size() << "\nsizes:";
  for (const auto& c : p) std::cout << ' ' << c.size();
  std::cout << "\n";

  std::vector<ClassStats> stats;
  if (!o.labels.empty()) {
    const Clustering truth = io::read_labels(o.labels);
    const NoiseHandling noise = noise_handling_from_string(o.ari_noise);
    std::vector<double> ari;
    for (const auto& c : *set) ari.push_back(adjusted_rand(c, truth, noise));
    stats = class_stats(p, ari, "ari");
    std::cout << "adjusted Rand index vs labels (noise: " << to_string(noise) << ")\n";
    print_stats(stats);
  }
  if (!o.statistic.empty()) {
    std::vector<double> values;
    for (std::size_t r = 0; r < set->size(); ++r) {
      auto v = provenance_number((*set)[r], o.statistic);
      if (!v) throw UsageError("record " + std::to_string(r) + " has no numeric '" + o.statistic + "'");
      values.push_back(*v);
    }
    auto more = class_stats(p, values, o.statistic);
    std::cout << o.statistic << "\n";
    print_stats(more);
    stats.insert(stats.end(), more.begin(), more.end());
  }

  if (!o.output.empty()) {
    io::write_text(o.output, io::partition_csv(p, set ? &*set : nullptr));
    std::cout << "wrote " << o.output << "\n";
  }
  if (!o.stats_output.empty()) {
    if (stats.empty()) throw UsageError("--stats-output needs --labels or --statistic");
    io::write_text(o.stats_output, io::class_stats_csv(stats));
    std::cout << "wrote " << o.stats_output << "\n";
  }
  return kOk;
}

int cmd_stability(const Options& o) {
  if (o.resamples < 1) throw UsageError("--resamples must be at least 1");
  if (!(o.threshold > 0.0 && o.threshold <= 1.0)) throw UsageError("--threshold must lie in (0, 1]");
  const auto set = load_set(o);
  const auto n = resolve_pairs(o.pairs, set.dataset_size(), o.include_diagonal);
  std::size_t runs = o.resamples;
  std::uint64_t base = 0;
  if (!n) {
    if (runs > 1)
      std::cerr << "warning: the sample covers every pair; running HPREF once on all pairs\n";
    runs = 1;
  } else {
    base = resolve_seed(o);
  }

  std::map<Partition, std::size_t> counts;
  std::vector<Partition> order;
  for (std::size_t r = 0; r < runs; ++r) {
    HprefConfig cfg;
    cfg.max_leaves = o.max_leaves;
    cfg.workers = o.workers;
    cfg.sampling = {n, derive_seed(base, r), o.include_diagonal};
    Partition leaves = normalized(leaf_partition(run_hpref(set, cfg)));
    if (counts[leaves]++ == 0) order.push_back(std::move(leaves));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const Partition& a, const Partition& b) { return counts[a] > counts[b]; });

  std::cout << "resamples: " << runs << "\npairs per sample: " << (n ? std::to_string(*n) : "all") << "\n"
            << "distinct leaf partitions: " << order.size() << "\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::cout << "  #" << i + 1 << " frequency " << counts[order[i]] << "/" << runs << " classes "
              << order[i].size() << ":";
    for (const auto& c : order[i]) {
      std::cout << " {";
      for (std::size_t k = 0; k < c.size(); ++k) std::cout << (k ? "," : "") << c[k];
      std::cout << "}";
    }
    std::cout << "\n";
  }
  const double top = static_cast<double>(counts[order.front()]) / static_cast<double>(runs);
  if (top < o.threshold) {
    std::cout << "unstable: top frequency " << format_double(top) << " below threshold "
              << format_double(o.threshold) << "\n";
    return kUnstable;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Hierarchical partitioning of clusterings by repeated pair features"};
  app.require_subcommand(1);

  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", o.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--pairs", o.pairs, "Sampled pairs: a count, 'full', or 'auto' (all pairs up to 10^6)");
    sub->add_option("--seed", o.seed, "Pair-sampling seed (a random one is chosen and printed if omitted)");
    sub->add_flag("--include-diagonal,!--no-diagonal", o.include_diagonal,
                  "Sample the (x, x) pairs that mark noise (default on)");
    sub->add_option("--max-leaves", o.max_leaves, "Stop once the tree has this many leaves");
  };

  auto* gen = app.add_subcommand("generate", "Run a clustering grid and write a clustering-set file");
  gen->add_option("--preset", o.preset, "Bundled dataset and grid: iris, toy, two-regime");
  gen->add_option("--input", o.input, "Dataset CSV (with --grid)");
  gen->add_option("--grid", o.grid, "Grid spec JSON (overrides the preset's grid)");
  gen->add_option("--output", o.output, "Clustering-set file to write");
  add_workers(gen);

  auto* hp = app.add_subcommand("hpref", "Build the dendrogram of a clustering set");
  hp->add_option("--input", o.input, "Clustering-set file");
  hp->add_option("--preset", o.preset, "Generate the set from a bundled preset instead");
  hp->add_option("--output", o.output, "Dendrogram JSON to write");
  hp->add_option("--svg", o.svg, "SVG drawing (default: output path with .svg)");
  hp->add_option("--newick", o.newick, "Also write Newick");
  hp->add_option("--cut", o.cut, "Color the drawing by the K-class cut");
  hp->add_option("--pca-output", o.pca_output, "Write a two-component projection of the rows as CSV");
  add_sampling(hp);
  add_workers(hp);

  auto* cu = app.add_subcommand("cut", "Cut a dendrogram into K classes");
  cu->add_option("--input", o.input, "Dendrogram JSON");
  cu->add_option("--cut", o.cut, "Number of classes");
  cu->add_option("--clusterings", o.clusterings, "Clustering set the dendrogram was built from");
  cu->add_option("--labels", o.labels, "Reference labels for adjusted Rand statistics");
  cu->add_option("--ari-noise", o.ari_noise, "Noise in the Rand index: singletons or cluster")
      ->check(CLI::IsMember({"singletons", "cluster"}));
  cu->add_option("--statistic", o.statistic, "Numeric provenance key to summarise per class (e.g. phi)");
  cu->add_option("--output", o.output, "Partition CSV to write");
  cu->add_option("--stats-output", o.stats_output, "Statistics CSV to write");

  auto* st = app.add_subcommand("stability", "Rerun HPREF on independent pair samples");
  st->add_option("--input", o.input, "Clustering-set file");
  st->add_option("--preset", o.preset, "Generate the set from a bundled preset instead");
  st->add_option("--resamples", o.resamples, "Number of pair samples");
  st->add_option("--threshold", o.threshold, "Required frequency of the most common partition");
  add_sampling(st);
  add_workers(st);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return cmd_generate(o);
    if (*hp) return cmd_hpref(o);
    if (*cu) return cmd_cut(o);
    if (*st) return cmd_stability(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
