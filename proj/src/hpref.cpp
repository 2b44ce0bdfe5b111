#include "hpref/hpref.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

namespace hpref {

SampleDescriptor SampleDescriptor::of(const PairSample& ps) {
  return {ps.mode, ps.size(), ps.requested, ps.seed, ps.include_diagonal, ps.dataset_size};
}

double score(const ColumnGroups& groups) {
  return static_cast<double>(groups.nonconstant_count + groups.top_multiplicity());
}

std::vector<std::size_t> Dendrogram::preorder() const {
  std::vector<std::size_t> order;
  if (nodes.empty()) return order;
  order.reserve(nodes.size());
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    order.push_back(id);
    if (const auto& s = nodes[id].split) {
      stack.push_back(s->right);
      stack.push_back(s->left);
    }
  }
  return order;
}

std::vector<std::size_t> Dendrogram::leaves() const {
  std::vector<std::size_t> out;
  for (auto id : preorder())
    if (nodes[id].is_leaf()) out.push_back(id);
  return out;
}

std::vector<std::size_t> Dendrogram::multiplicities() const {
  std::vector<std::size_t> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back(e.multiplicity);
  return out;
}

void Dendrogram::validate() const {
  auto fail = [](const std::string& what) { throw std::logic_error("invalid dendrogram: " + what); };
  if (nodes.empty()) fail("no nodes");
  if (root().parent) fail("root has a parent");
  std::size_t roots = 0;
  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const HprefNode& n = nodes[id];
    if (n.id != id) fail("node id " + std::to_string(n.id) + " stored at index " + std::to_string(id));
    if (!n.parent) ++roots;
    if (!std::is_sorted(n.members.begin(), n.members.end())) fail("unsorted members");
    if (!n.split) continue;
    const auto& s = *n.split;
    if (s.left >= nodes.size() || s.right >= nodes.size()) fail("child id out of range");
    const auto& l = nodes[s.left];
    const auto& r = nodes[s.right];
    if (l.parent != id || r.parent != id) fail("child does not point back to its parent");
    if (l.members.empty() || r.members.empty()) fail("empty child");
    std::vector<std::size_t> merged;
    std::merge(l.members.begin(), l.members.end(), r.members.begin(), r.members.end(),
               std::back_inserter(merged));
    if (merged != n.members) fail("children do not partition node " + std::to_string(id));
    if (n.members.size() < 2) fail("singleton node was split");
    if (weighted && (l.weight > n.weight || r.weight > n.weight)) fail("weights not monotone");
    if (l.creation_event != r.creation_event || l.creation_event <= n.creation_event)
      fail("creation events out of order");
  }
  if (roots != 1) fail("expected exactly one parentless node");
  if (max_leaves != 0 && leaf_count() > max_leaves) fail("more leaves than max_leaves");
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (events[e].index != e + 1) fail("event indices not consecutive");
    const auto& n = nodes.at(events[e].node);
    if (!n.split || nodes[n.split->left].creation_event != e + 1) fail("event/node mismatch");
  }
}

namespace {

struct LeafEval {
  double score = 0.0;
  std::size_t nonconstant = 0;
  std::size_t multiplicity = 0;
  std::optional<BitPattern> pattern;
  std::vector<std::size_t> witnesses;
};

LeafEval evaluate(const FeatureMatrix& fm, const std::vector<std::size_t>& members,
                  const ScoringFunction& scoring) {
  const ColumnGroups groups = group_columns(fm, members);
  LeafEval ev;
  ev.score = scoring(groups);
  ev.nonconstant = groups.nonconstant_count;
  ev.multiplicity = groups.top_multiplicity();
  if (groups.top) {
    ev.pattern = groups.groups[*groups.top].pattern;
    ev.witnesses = groups.columns_of(*groups.top);
  }
  return ev;
}

}  // namespace

Dendrogram run_hpref(const FeatureMatrix& fm, const HprefConfig& cfg,
                     std::vector<std::string> row_names) {
  if (fm.rows() == 0) throw std::invalid_argument("feature matrix has no rows");
  if (cfg.max_leaves == 0) throw std::invalid_argument("max_leaves must be at least 1");
  if (!cfg.scoring) throw std::invalid_argument("scoring function is empty");
  if (row_names.empty())
    for (std::size_t r = 0; r < fm.rows(); ++r) row_names.push_back(std::to_string(r));
  if (row_names.size() != fm.rows()) throw std::invalid_argument("row name count does not match matrix rows");

  Dendrogram d;
  d.row_names = std::move(row_names);
  d.sample = SampleDescriptor::of(fm.pairs());
  d.max_leaves = cfg.max_leaves;

  std::vector<LeafEval> evals;  // indexed by node id, dropped once split
  auto add_node = [&](std::vector<std::size_t> members, std::optional<std::size_t> parent,
                      std::size_t event, LeafEval ev) {
    HprefNode n;
    n.id = d.nodes.size();
    n.parent = parent;
    n.members = std::move(members);
    n.score = ev.score;
    n.nonconstant = ev.nonconstant;
    n.top_multiplicity = ev.multiplicity;
    n.creation_event = event;
    d.nodes.push_back(std::move(n));
    evals.push_back(std::move(ev));
    return d.nodes.back().id;
  };

  std::vector<std::size_t> all(fm.rows());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
  add_node(all, std::nullopt, 0, evaluate(fm, all, cfg.scoring));
  std::vector<std::size_t> leaves{0};

  while (leaves.size() < cfg.max_leaves) {
    std::optional<std::size_t> best;
    for (auto id : leaves) {
      if (!evals[id].pattern) continue;  // nothing to split on
      if (!best) {
        best = id;
        continue;
      }
      const HprefNode& a = d.nodes[id];
      const HprefNode& b = d.nodes[*best];
      // Node ids grow with creation, left sibling first.
      if (a.score > b.score || (a.score == b.score && id < *best)) best = id;
    }
    if (!best) break;

    const std::size_t parent = *best;
    const std::size_t event = d.events.size() + 1;
    LeafEval chosen = std::move(evals[parent]);
    evals[parent] = LeafEval{};
    const BitPattern& pattern = *chosen.pattern;

    std::vector<std::size_t> zeros;
    std::vector<std::size_t> ones;
    const auto& members = d.nodes[parent].members;
    for (std::size_t k = 0; k < members.size(); ++k) (pattern.get(k) ? ones : zeros).push_back(members[k]);

    LeafEval left_eval;
    LeafEval right_eval;
    if (cfg.workers > 1) {
      auto fut = std::async(std::launch::async, [&] { return evaluate(fm, ones, cfg.scoring); });
      left_eval = evaluate(fm, zeros, cfg.scoring);
      right_eval = fut.get();
    } else {
      left_eval = evaluate(fm, zeros, cfg.scoring);
      right_eval = evaluate(fm, ones, cfg.scoring);
    }
    const std::size_t left = add_node(std::move(zeros), parent, event, std::move(left_eval));
    const std::size_t right = add_node(std::move(ones), parent, event, std::move(right_eval));

    NodeSplit split;
    split.pattern = pattern;
    split.multiplicity = chosen.multiplicity;
    split.witness_columns = std::move(chosen.witnesses);
    if (!fm.pairs().pairs.empty()) {
      split.witness_pairs.reserve(split.witness_columns.size());
      for (auto c : split.witness_columns) split.witness_pairs.push_back(fm.pairs().pairs[c]);
    }
    split.left = left;
    split.right = right;

    HprefNode& p = d.nodes[parent];
    d.events.push_back({event, parent, p.score, pattern, chosen.multiplicity});
    p.split = std::move(split);

    auto it = std::find(leaves.begin(), leaves.end(), parent);
    *it = right;
    leaves.insert(it, left);
  }
  return d;
}

Dendrogram run_hpref(const ClusteringSet& set, const HprefConfig& cfg) {
  const auto& s = cfg.sampling;
  const PairSample ps = s.pairs ? sample_pairs(set.dataset_size(), *s.pairs, s.seed, s.include_diagonal)
                                : enumerate_pairs(set.dataset_size(), s.include_diagonal);
  std::vector<std::string> names;
  names.reserve(set.size());
  for (std::size_t r = 0; r < set.size(); ++r) names.push_back(set.name(r));
  return run_hpref(build_matrix(set, ps), cfg, std::move(names));
}

Dendrogram assign_weights(Dendrogram d) {
  // Total score of the nodes created at each event; suffix sums give the
  // contribution of everything created strictly later.
  std::size_t last_event = 0;
  for (const auto& n : d.nodes) last_event = std::max(last_event, n.creation_event);
  std::vector<double> created(last_event + 2, 0.0);
  for (const auto& n : d.nodes) created[n.creation_event] += n.score;
  std::vector<double> later(last_event + 2, 0.0);
  for (std::size_t e = last_event + 1; e-- > 0;) later[e] = later[e + 1] + created[e + 1];
  for (auto& n : d.nodes) n.weight = n.score + later[n.creation_event];
  d.weighted = true;
  return d;
}

Ultrametric induced_metric(const Dendrogram& d) {
  if (!d.weighted) throw std::invalid_argument("dendrogram weights have not been assigned");
  Ultrametric u(d.row_count());
  for (const auto& n : d.nodes) {
    if (n.split) {
      const auto& l = d.nodes[n.split->left].members;
      const auto& r = d.nodes[n.split->right].members;
      for (auto x : l)
        for (auto y : r) u.set(x, y, n.weight);
    } else {
      for (std::size_t a = 0; a < n.members.size(); ++a)
        for (std::size_t b = a + 1; b < n.members.size(); ++b) u.set(n.members[a], n.members[b], n.weight);
    }
  }
  return u;
}

Partition cut(const Dendrogram& d, std::size_t k) {
  const std::size_t leaves = d.leaf_count();
  if (k < 2 || k > leaves)
    throw std::invalid_argument("cut level " + std::to_string(k) + " outside [2, " + std::to_string(leaves) +
                                "]");
  std::vector<bool> open(d.nodes.size(), false);  // split within the first k-1 events
  for (std::size_t e = 0; e + 1 < k; ++e) open[d.events[e].node] = true;
  Partition out;
  for (auto id : d.preorder()) {
    const auto& n = d.nodes[id];
    const bool reached = !n.parent || open[*n.parent];
    if (reached && !open[id]) out.push_back(n.members);
  }
  return out;
}

Partition leaf_partition(const Dendrogram& d) {
  Partition out;
  for (auto id : d.leaves()) out.push_back(d.nodes[id].members);
  return out;
}

Partition normalized(Partition p) {
  for (auto& cls : p) std::sort(cls.begin(), cls.end());
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace hpref
