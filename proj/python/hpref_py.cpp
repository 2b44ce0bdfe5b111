#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hpref/analysis.hpp"
#include "hpref/drivers.hpp"
#include "hpref/hpref.hpp"
#include "hpref/io.hpp"
#include "hpref/presets.hpp"

namespace py = pybind11;
using namespace hpref;

namespace {

ClusteringSet make_set(const std::vector<std::vector<std::int64_t>>& labels,
                       const std::vector<Provenance>& provenance) {
  if (labels.empty()) throw std::invalid_argument("need at least one clustering");
  if (!provenance.empty() && provenance.size() != labels.size())
    throw std::invalid_argument("provenance list must match the clustering count");
  std::vector<Clustering> cs;
  for (std::size_t r = 0; r < labels.size(); ++r)
    cs.push_back(Clustering::from_ints(labels[r], provenance.empty() ? Provenance{} : provenance[r]));
  return ClusteringSet(labels.front().size(), std::move(cs));
}

}  // namespace

PYBIND11_MODULE(_hpref, m) {
  m.doc() = "Hierarchical partitioning of clusterings by repeated pair features";

  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<io::IoError>(m, "IoError", PyExc_OSError);

  py::class_<ClusteringSet>(m, "ClusteringSet")
      .def(py::init(&make_set), py::arg("labels"), py::arg("provenance") = std::vector<Provenance>{})
      .def_property_readonly("dataset_size", &ClusteringSet::dataset_size)
      .def("__len__", &ClusteringSet::size)
      .def("labels", [](const ClusteringSet& s, std::size_t r) { return s.clusterings().at(r).to_ints(); })
      .def("provenance", [](const ClusteringSet& s, std::size_t r) { return s.clusterings().at(r).provenance(); })
      .def("name", &ClusteringSet::name)
      .def("__eq__", [](const ClusteringSet& a, const ClusteringSet& b) { return a == b; });

  py::class_<SplitEvent>(m, "SplitEvent")
      .def_readonly("index", &SplitEvent::index)
      .def_readonly("node", &SplitEvent::node)
      .def_readonly("score", &SplitEvent::score)
      .def_readonly("multiplicity", &SplitEvent::multiplicity)
      .def_property_readonly("pattern", [](const SplitEvent& e) { return e.pattern.to_string(); });

  py::class_<HprefNode>(m, "Node")
      .def_readonly("id", &HprefNode::id)
      .def_readonly("parent", &HprefNode::parent)
      .def_readonly("members", &HprefNode::members)
      .def_readonly("score", &HprefNode::score)
      .def_readonly("weight", &HprefNode::weight)
      .def_readonly("creation_event", &HprefNode::creation_event)
      .def_property_readonly("children", [](const HprefNode& n) -> std::optional<std::pair<std::size_t, std::size_t>> {
        if (!n.split) return std::nullopt;
        return std::make_pair(n.split->left, n.split->right);
      });

  py::class_<Dendrogram>(m, "Dendrogram")
      .def_readonly("nodes", &Dendrogram::nodes)
      .def_readonly("events", &Dendrogram::events)
      .def_readonly("row_names", &Dendrogram::row_names)
      .def_readonly("weighted", &Dendrogram::weighted)
      .def_property_readonly("sample_mode", [](const Dendrogram& d) { return to_string(d.sample.mode); })
      .def_property_readonly("sample_pairs", [](const Dendrogram& d) { return d.sample.pairs; })
      .def_property_readonly("sample_seed", [](const Dendrogram& d) { return d.sample.seed; })
      .def("multiplicities", &Dendrogram::multiplicities)
      .def("leaf_count", &Dendrogram::leaf_count)
      .def("to_json", &io::dendrogram_to_json)
      .def("to_newick", &io::dendrogram_to_newick)
      .def("to_svg", &io::render_dendrogram_svg, py::arg("coloring") = std::nullopt)
      .def_static("from_json", [](const std::string& text) { return io::dendrogram_from_json(text); })
      .def("__eq__", [](const Dendrogram& a, const Dendrogram& b) { return a == b; });

  m.def(
      "run_hpref",
      [](const ClusteringSet& set, std::size_t max_leaves, std::optional<std::size_t> pairs, std::uint64_t seed,
         bool include_diagonal, unsigned workers) {
        HprefConfig cfg;
        cfg.max_leaves = max_leaves;
        cfg.sampling = {pairs, seed, include_diagonal};
        cfg.workers = workers;
        py::gil_scoped_release release;
        return assign_weights(run_hpref(set, cfg));
      },
      py::arg("clusterings"), py::arg("max_leaves") = 1, py::arg("pairs") = std::nullopt, py::arg("seed") = 0,
      py::arg("include_diagonal") = true, py::arg("workers") = 1,
      "Build the weighted dendrogram. pairs=None uses every pair.");

  m.def("cut", &cut, py::arg("dendrogram"), py::arg("k"));
  m.def("leaf_partition", &leaf_partition);
  m.def(
      "induced_metric",
      [](const Dendrogram& d) {
        const auto u = induced_metric(d);
        std::vector<std::vector<double>> out(u.size(), std::vector<double>(u.size()));
        for (std::size_t i = 0; i < u.size(); ++i)
          for (std::size_t j = 0; j < u.size(); ++j) out[i][j] = u(i, j);
        return out;
      },
      "Distance matrix between clusterings.");

  m.def(
      "adjusted_rand",
      [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, const std::string& noise) {
        return adjusted_rand(Clustering::from_ints(a), Clustering::from_ints(b), noise_handling_from_string(noise));
      },
      py::arg("a"), py::arg("b"), py::arg("noise") = "singletons");

  m.def(
      "pca2",
      [](const ClusteringSet& set, std::optional<std::size_t> pairs, std::uint64_t seed, bool centered) {
        const auto ps = pairs ? sample_pairs(set.dataset_size(), *pairs, seed) : enumerate_pairs(set.dataset_size());
        const auto p = pca2(build_matrix(set, ps), centered ? Centering::Centered : Centering::Uncentered);
        return py::make_tuple(p.projections, p.explained_ratio);
      },
      py::arg("clusterings"), py::arg("pairs") = std::nullopt, py::arg("seed") = 0, py::arg("centered") = true,
      "Two-component projection of the pair-feature rows: (projections, explained ratios).");

  m.def(
      "dbscan",
      [](const std::vector<std::vector<double>>& points, double eps, std::size_t min_pts) {
        return dbscan(Dataset(points), {eps, min_pts}).to_ints();
      },
      py::arg("points"), py::arg("eps"), py::arg("min_pts"));

  m.def(
      "preset_clusterings",
      [](const std::string& name, unsigned workers) {
        const auto p = presets::preset(name);
        py::gil_scoped_release release;
        return run_grid(p.dataset, p.grid, workers);
      },
      py::arg("name"), py::arg("workers") = 1, "Run a bundled preset grid: iris, toy or two-regime.");
  m.def("iris_species", [] { return presets::iris_species().to_ints(); });

  m.def("read_clusterings", py::overload_cast<const std::string&>(&io::read_clusterings));
  m.def("write_clusterings", py::overload_cast<const ClusteringSet&, const std::string&>(&io::write_clusterings));
}
