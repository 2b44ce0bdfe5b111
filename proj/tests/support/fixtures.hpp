#pragma once

#include <vector>

#include "hpref/clustering.hpp"
#include "oracles.hpp"

namespace fixtures {

// Points a, b, c, d = 0..3.
inline oracle::Labels c1() { return {0, 0, 1, 1}; }
inline oracle::Labels c2() { return {0, 0, 1, -1}; }
inline oracle::Labels c3() { return {0, 0, 0, 0}; }

inline hpref::Clustering to_clustering(const oracle::Labels& l, const std::string& name = {}) {
  std::vector<std::int64_t> v(l.begin(), l.end());
  hpref::Provenance p;
  if (!name.empty()) p["name"] = name;
  return hpref::Clustering::from_ints(v, p);
}

inline hpref::ClusteringSet to_set(const std::vector<oracle::Labels>& rows) {
  std::vector<hpref::Clustering> cs;
  for (std::size_t r = 0; r < rows.size(); ++r) cs.push_back(to_clustering(rows[r], "C" + std::to_string(r + 1)));
  return hpref::ClusteringSet(rows.front().size(), std::move(cs));
}

inline hpref::ClusteringSet tiny() { return to_set({c1(), c2(), c3()}); }

}  // namespace fixtures
