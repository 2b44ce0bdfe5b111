#include "hpref/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace hpref::io {

using nlohmann::json;

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ';' || ch == '\t') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

void write_clusterings(const ClusteringSet& set, std::ostream& out) {
  out << "hpref-clusterings 1\n";
  out << "N " << set.dataset_size() << " S " << set.size() << "\n";
  for (const auto& c : set) {
    out << "@ " << json(c.provenance()).dump() << "\n";
    bool first = true;
    for (auto l : c.labels()) {
      if (!first) out << ' ';
      out << l.to_int();
      first = false;
    }
    out << "\n";
  }
}

void write_clusterings(const ClusteringSet& set, const std::string& path) {
  std::ostringstream ss;
  write_clusterings(set, ss);
  write_text(path, ss.str());
}

ClusteringSet read_clusterings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](const char* expecting) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!trim(line).empty()) return;
    }
    throw ParseError(source, lineno, std::string("unexpected end of file, expecting ") + expecting);
  };

  next_line("header");
  const auto magic = split_ws(line);
  if (magic.size() != 2 || magic[0] != "hpref-clusterings")
    throw ParseError(source, lineno, "not a clustering-set file (missing 'hpref-clusterings' header)");
  if (magic[1] != "1") throw ParseError(source, lineno, "unsupported format version " + magic[1]);

  next_line("size line");
  const auto sizes = split_ws(line);
  std::optional<std::int64_t> N;
  std::optional<std::int64_t> S;
  if (sizes.size() == 4 && sizes[0] == "N" && sizes[2] == "S") {
    N = parse_int(sizes[1]);
    S = parse_int(sizes[3]);
  }
  if (!N || !S || *N < 1 || *S < 0) throw ParseError(source, lineno, "malformed size line, expected 'N <points> S <count>'");

  std::vector<Clustering> clusterings;
  clusterings.reserve(static_cast<std::size_t>(*S));
  for (std::int64_t r = 0; r < *S; ++r) {
    next_line("provenance line");
    if (line.rfind("@", 0) != 0)
      throw ParseError(source, lineno, "record " + std::to_string(r) + ": expected provenance line starting with '@'");
    Provenance prov;
    try {
      const json j = json::parse(line.substr(1));
      if (!j.is_object()) throw ParseError(source, lineno, "provenance must be a JSON object");
      for (const auto& [k, v] : j.items()) {
        if (!v.is_string()) throw ParseError(source, lineno, "provenance value for '" + k + "' is not a string");
        prov[k] = v.get<std::string>();
      }
    } catch (const json::exception& e) {
      throw ParseError(source, lineno, std::string("bad provenance JSON: ") + e.what());
    }

    next_line("label row");
    const auto tokens = split_ws(line);
    if (tokens.size() != static_cast<std::size_t>(*N))
      throw ParseError(source, lineno,
                       "record " + std::to_string(r) + " has " + std::to_string(tokens.size()) + " labels, expected " +
                           std::to_string(*N));
    std::vector<ClusterLabel> labels;
    labels.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto v = parse_int(t);
      if (!v) throw ParseError(source, lineno, "label '" + t + "' is not an integer");
      if (*v < -1) throw ParseError(source, lineno, "label " + t + " below -1");
      labels.push_back(ClusterLabel::from_int(*v));
    }
    clusterings.push_back(canonicalize(Clustering(std::move(labels), std::move(prov))));
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty())
      throw ParseError(source, lineno, "unexpected content after " + std::to_string(*S) + " records");
  }
  if (clusterings.empty()) throw ParseError(source, lineno, "file declares no clusterings");
  return ClusteringSet(static_cast<std::size_t>(*N), std::move(clusterings));
}

ClusteringSet read_clusterings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_clusterings(in, path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> points;
  std::vector<bool> keep;  // numeric columns, fixed by the first data row
  std::string line;
  std::size_t lineno = 0;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    std::vector<std::optional<double>> values;
    for (const auto& f : fields) values.push_back(parse_double(f));

    if (!header_checked) {
      header_checked = true;
      const bool any_numeric = std::any_of(values.begin(), values.end(), [](auto& v) { return v.has_value(); });
      if (!any_numeric) continue;  // header
    }
    if (keep.empty()) {
      for (const auto& v : values) keep.push_back(v.has_value());
      if (std::none_of(keep.begin(), keep.end(), [](bool k) { return k; }))
        throw ParseError(path, lineno, "no numeric fields");
    }
    if (values.size() != keep.size())
      throw ParseError(path, lineno, "row has " + std::to_string(values.size()) + " fields, expected " +
                                         std::to_string(keep.size()));
    std::vector<double> p;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!keep[k]) continue;
      if (!values[k]) throw ParseError(path, lineno, "non-numeric value '" + fields[k] + "'");
      p.push_back(*values[k]);
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw ParseError(path, lineno, "no data rows");
  return Dataset(std::move(points));
}

Clustering read_labels(const std::string& path) {
  const std::string text = read_text(path);
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  if (tokens.empty()) throw ParseError(path, 0, "no labels");

  std::vector<std::int64_t> ints;
  bool all_int = true;
  for (const auto& t : tokens) {
    auto v = parse_int(t);
    if (!v || *v < -1) {
      all_int = false;
      break;
    }
    ints.push_back(*v);
  }
  if (!all_int) {
    std::map<std::string, std::int64_t> ids;
    ints.clear();
    for (const auto& t : tokens) ints.push_back(ids.try_emplace(t, static_cast<std::int64_t>(ids.size())).first->second);
  }
  return canonicalize(Clustering::from_ints(ints, {{"name", "labels"}}));
}

GridSpec parse_grid_spec(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(source, 0, "grid spec must be a JSON object");
  GridSpec spec;
  try {
    for (const auto& [key, value] : j.items())
      if (key != "dbscan" && key != "kmeans") throw ParseError(source, 0, "unknown grid section '" + key + "'");
    if (j.contains("dbscan")) {
      const auto& d = j.at("dbscan");
      GridSpec::Dbscan g;
      const auto& eps = d.at("eps");
      if (eps.is_array()) {
        g.eps = eps.get<std::vector<double>>();
      } else {
        const double start = eps.at("start").get<double>();
        const double step = eps.at("step").get<double>();
        const auto count = eps.at("count").get<std::size_t>();
        // start + i * step computed as a rounded decimal so 0.05 * 3 is 0.15
        for (std::size_t i = 0; i < count; ++i) {
          const double v = start + static_cast<double>(i) * step;
          g.eps.push_back(std::stod(format_double(std::round(v * 1e12) / 1e12)));
        }
      }
      g.min_pts = d.at("min_pts").get<std::vector<std::size_t>>();
      for (double e : g.eps)
        if (!(e > 0)) throw ParseError(source, 0, "eps values must be positive");
      for (auto m : g.min_pts)
        if (m < 1) throw ParseError(source, 0, "min_pts values must be at least 1");
      spec.dbscan = std::move(g);
    }
    if (j.contains("kmeans")) {
      const auto& k = j.at("kmeans");
      GridSpec::Kmeans km;
      km.k = k.at("k").get<std::size_t>();
      km.uniform_runs = k.value("uniform_runs", std::size_t{0});
      km.plusplus_runs = k.value("plusplus_runs", std::size_t{0});
      km.seed = k.value("seed", std::uint64_t{0});
      km.max_iterations = k.value("max_iterations", std::size_t{300});
      km.tolerance = k.value("tolerance", 1e-4);
      if (km.k < 1) throw ParseError(source, 0, "k must be at least 1");
      spec.kmeans = km;
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("malformed grid spec: ") + e.what());
  }
  if (spec.size() == 0) throw ParseError(source, 0, "grid spec has no cells");
  return spec;
}

GridSpec read_grid_spec(const std::string& path) { return parse_grid_spec(read_text(path), path); }

// ---------------------------------------------------------------------------
// Dendrogram documents

namespace {

json pair_json(const PointPair& p) { return json::array({p.first, p.second}); }

}  // namespace

std::string dendrogram_to_json(const Dendrogram& d) {
  json doc;
  doc["format"] = "hpref-dendrogram";
  doc["version"] = 1;
  doc["max_leaves"] = d.max_leaves;
  doc["weighted"] = d.weighted;
  doc["rows"] = d.row_names;
  doc["sample"] = {{"mode", to_string(d.sample.mode)},
                   {"pairs", d.sample.pairs},
                   {"requested", d.sample.requested},
                   {"seed", d.sample.seed},
                   {"include_diagonal", d.sample.include_diagonal},
                   {"dataset_size", d.sample.dataset_size}};
  json nodes = json::array();
  for (const auto& n : d.nodes) {
    json jn;
    jn["id"] = n.id;
    jn["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    jn["members"] = n.members;
    jn["score"] = n.score;
    jn["nonconstant"] = n.nonconstant;
    jn["top_multiplicity"] = n.top_multiplicity;
    jn["creation_event"] = n.creation_event;
    jn["weight"] = n.weight;
    if (n.split) {
      const auto& s = *n.split;
      json pairs = json::array();
      for (const auto& p : s.witness_pairs) pairs.push_back(pair_json(p));
      jn["split"] = {{"pattern", s.pattern.to_string()},
                     {"multiplicity", s.multiplicity},
                     {"left", s.left},
                     {"right", s.right},
                     {"witness_columns", s.witness_columns},
                     {"witness_pairs", pairs}};
    } else {
      jn["split"] = nullptr;
    }
    nodes.push_back(std::move(jn));
  }
  doc["nodes"] = std::move(nodes);
  json events = json::array();
  for (const auto& e : d.events)
    events.push_back({{"index", e.index},
                      {"node", e.node},
                      {"score", e.score},
                      {"pattern", e.pattern.to_string()},
                      {"multiplicity", e.multiplicity}});
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

Dendrogram dendrogram_from_json(const std::string& text, const std::string& source) {
  Dendrogram d;
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string()) != "hpref-dendrogram")
      throw ParseError(source, 0, "not an hpref dendrogram document");
    if (doc.at("version").get<int>() != 1) throw ParseError(source, 0, "unsupported dendrogram version");
    d.max_leaves = doc.at("max_leaves").get<std::size_t>();
    d.weighted = doc.at("weighted").get<bool>();
    d.row_names = doc.at("rows").get<std::vector<std::string>>();
    const auto& s = doc.at("sample");
    d.sample.mode = sample_mode_from_string(s.at("mode").get<std::string>());
    d.sample.pairs = s.at("pairs").get<std::size_t>();
    d.sample.requested = s.at("requested").get<std::size_t>();
    d.sample.seed = s.at("seed").get<std::uint64_t>();
    d.sample.include_diagonal = s.at("include_diagonal").get<bool>();
    d.sample.dataset_size = s.at("dataset_size").get<std::size_t>();
    for (const auto& jn : doc.at("nodes")) {
      HprefNode n;
      n.id = jn.at("id").get<std::size_t>();
      if (!jn.at("parent").is_null()) n.parent = jn.at("parent").get<std::size_t>();
      n.members = jn.at("members").get<std::vector<std::size_t>>();
      n.score = jn.at("score").get<double>();
      n.nonconstant = jn.at("nonconstant").get<std::size_t>();
      n.top_multiplicity = jn.at("top_multiplicity").get<std::size_t>();
      n.creation_event = jn.at("creation_event").get<std::size_t>();
      n.weight = jn.at("weight").get<double>();
      if (!jn.at("split").is_null()) {
        const auto& js = jn.at("split");
        NodeSplit sp;
        sp.pattern = BitPattern::from_string(js.at("pattern").get<std::string>());
        sp.multiplicity = js.at("multiplicity").get<std::size_t>();
        sp.left = js.at("left").get<std::size_t>();
        sp.right = js.at("right").get<std::size_t>();
        sp.witness_columns = js.at("witness_columns").get<std::vector<std::size_t>>();
        for (const auto& p : js.at("witness_pairs"))
          sp.witness_pairs.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
        n.split = std::move(sp);
      }
      d.nodes.push_back(std::move(n));
    }
    for (const auto& je : doc.at("events")) {
      SplitEvent e;
      e.index = je.at("index").get<std::size_t>();
      e.node = je.at("node").get<std::size_t>();
      e.score = je.at("score").get<double>();
      e.pattern = BitPattern::from_string(je.at("pattern").get<std::string>());
      e.multiplicity = je.at("multiplicity").get<std::size_t>();
      d.events.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("malformed dendrogram document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, 0, e.what());
  }
  try {
    d.validate();
  } catch (const std::logic_error& e) {
    throw ParseError(source, 0, e.what());
  }
  return d;
}

void write_dendrogram(const Dendrogram& d, const std::string& path) { write_text(path, dendrogram_to_json(d)); }

Dendrogram read_dendrogram(const std::string& path) { return dendrogram_from_json(read_text(path), path); }

namespace {

std::string newick_label(const std::string& s) {
  const bool plain = !s.empty() && s.find_first_of(" \t\n()[]':;,") == std::string::npos;
  if (plain) return s;
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += '\'';
    out += ch;
  }
  return out + "'";
}

void newick_node(const Dendrogram& d, std::size_t id, std::string& out) {
  const auto& n = d.nodes[id];
  if (n.split) {
    out += '(';
    newick_node(d, n.split->left, out);
    out += ',';
    newick_node(d, n.split->right, out);
    out += ')';
  } else {
    std::string label;
    for (std::size_t k = 0; k < n.members.size(); ++k) {
      if (k) label += '|';
      label += d.row_names.at(n.members[k]);
    }
    out += newick_label(label);
  }
  out += "[&weight=" + format_double(n.weight) + "]";
  if (n.parent) out += ":" + format_double(d.nodes[*n.parent].weight - n.weight);
}

}  // namespace

std::string dendrogram_to_newick(const Dendrogram& d) {
  std::string out;
  newick_node(d, 0, out);
  return out + ";\n";
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#e377c2", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#bcbd22", "#7f7f7f"};

}  // namespace

std::string render_dendrogram_svg(const Dendrogram& d, const std::optional<Partition>& coloring) {
  if (!d.weighted) throw std::invalid_argument("dendrogram weights have not been assigned");

  // Class index per node for colored subtrees; -1 above the cut.
  std::vector<int> node_class(d.nodes.size(), -1);
  if (coloring) {
    const Partition wanted = normalized(*coloring);
    std::optional<std::size_t> level;
    for (std::size_t k = 2; k <= d.leaf_count(); ++k)
      if (normalized(cut(d, k)) == wanted) {
        level = k;
        break;
      }
    if (!level) throw std::invalid_argument("coloring is not a cut of the dendrogram");
    const Partition classes = cut(d, *level);
    for (std::size_t id : d.preorder()) {
      const auto& n = d.nodes[id];
      if (n.parent && node_class[*n.parent] >= 0) {
        node_class[id] = node_class[*n.parent];
        continue;
      }
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (classes[c] == n.members) node_class[id] = static_cast<int>(c);
    }
  }

  const double width = 720.0;
  const double height = 480.0;
  const double left = 70.0;
  const double right = 20.0;
  const double top = 30.0;
  const double bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double wmax = d.root().weight > 0 ? d.root().weight : 1.0;
  auto ypos = [&](double w) { return top + (1.0 - w / wmax) * plot_h; };

  const auto leaves = d.leaves();
  std::vector<double> x(d.nodes.size(), 0.0);
  for (std::size_t k = 0; k < leaves.size(); ++k)
    x[leaves[k]] = left + plot_w * (static_cast<double>(k) + 0.5) / static_cast<double>(leaves.size());
  const auto order = d.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (const auto& s = d.nodes[*it].split) x[*it] = (x[s->left] + x[s->right]) / 2.0;

  auto color = [&](std::size_t id) {
    return node_class[id] >= 0 ? std::string(kPalette[static_cast<std::size_t>(node_class[id]) % 10])
                               : std::string("#000000");
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg << "<g class=\"axis\" stroke=\"#444444\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<line x1=\"" << num(left - 10) << "\" y1=\"" << num(ypos(0)) << "\" x2=\"" << num(left - 10)
      << "\" y2=\"" << num(ypos(wmax)) << "\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double w = wmax * t / 4.0;
    svg << "<line x1=\"" << num(left - 14) << "\" y1=\"" << num(ypos(w)) << "\" x2=\"" << num(left - 10)
        << "\" y2=\"" << num(ypos(w)) << "\"/>";
    svg << "<text x=\"" << num(left - 16) << "\" y=\"" << num(ypos(w) + 4) << "\" text-anchor=\"end\" stroke=\"none\">"
        << num(w) << "</text>\n";
  }
  svg << "</g>\n";

  svg << "<g class=\"tree\" stroke-width=\"2\" fill=\"none\">\n";
  for (std::size_t id : order) {
    const auto& n = d.nodes[id];
    if (n.parent) {
      svg << "<line class=\"edge\" data-node=\"" << id << "\" x1=\"" << num(x[id]) << "\" y1=\"" << num(ypos(n.weight))
          << "\" x2=\"" << num(x[id]) << "\" y2=\"" << num(ypos(d.nodes[*n.parent].weight)) << "\" stroke=\""
          << color(id) << "\"/>\n";
    }
    if (n.split) {
      svg << "<line class=\"join\" data-node=\"" << id << "\" data-weight=\"" << format_double(n.weight)
          << "\" x1=\"" << num(x[n.split->left]) << "\" y1=\"" << num(ypos(n.weight)) << "\" x2=\""
          << num(x[n.split->right]) << "\" y2=\"" << num(ypos(n.weight)) << "\" stroke=\"" << color(id) << "\"/>\n";
    }
  }
  svg << "</g>\n";

  svg << "<g class=\"leaves\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n";
  for (std::size_t id : leaves) {
    const auto& n = d.nodes[id];
    svg << "<circle class=\"leaf\" data-node=\"" << id << "\" data-size=\"" << n.members.size() << "\"";
    if (node_class[id] >= 0) svg << " data-class=\"" << node_class[id] << "\"";
    svg << " cx=\"" << num(x[id]) << "\" cy=\"" << num(ypos(n.weight)) << "\" r=\"4\" fill=\"" << color(id)
        << "\"/>";
    svg << "<text x=\"" << num(x[id]) << "\" y=\"" << num(ypos(0) + 20) << "\">" << n.members.size()
        << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string class_stats_csv(const std::vector<ClassStats>& stats) {
  std::ostringstream out;
  out << "class,size,statistic,mean,min,max,std\n";
  for (const auto& s : stats) {
    out << s.class_id << ',' << s.count << ',' << s.statistic << ',' << format_double(s.mean) << ','
        << format_double(s.min) << ',' << format_double(s.max) << ','
        << (s.stddev ? format_double(*s.stddev) : std::string()) << '\n';
  }
  return out.str();
}

std::string partition_csv(const Partition& p, const ClusteringSet* set) {
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  for (std::size_t c = 0; c < p.size(); ++c)
    for (auto r : p[c]) rows.emplace_back(r, c);
  std::sort(rows.begin(), rows.end());
  std::ostringstream out;
  out << "row,class,name,provenance\n";
  for (const auto& [r, c] : rows) {
    std::string name = std::to_string(r);
    std::string prov;
    if (set) {
      name = set->name(r);
      for (const auto& [k, v] : (*set)[r].provenance()) {
        if (!prov.empty()) prov += ';';
        prov += k + "=" + v;
      }
    }
    auto quote = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    };
    out << r << ',' << c << ',' << quote(name) << ',' << quote(prov) << '\n';
  }
  return out.str();
}

}  // namespace hpref::io
