#include <doctest.h>

#include <map>
#include <random>
#include <stdexcept>
#include <set>

#include "fixtures.hpp"
#include "hpref/feature_matrix.hpp"

using namespace hpref;

namespace {

std::size_t column_of(const PairSample& ps, std::uint32_t i, std::uint32_t j) {
  for (std::size_t c = 0; c < ps.size(); ++c)
    if (ps.pairs[c].first == i && ps.pairs[c].second == j) return c;
  FAIL("pair not found");
  return 0;
}

std::string pattern_string(const oracle::Matrix& m, std::size_t rows, std::size_t col) {
  std::string s;
  for (std::size_t r = 0; r < rows; ++r) s.push_back(m[r][col] ? '1' : '0');
  return s;
}

FeatureMatrix from_oracle(const oracle::Matrix& m) {
  std::vector<std::vector<std::uint8_t>> rows;
  for (const auto& r : m) rows.emplace_back(r.begin(), r.end());
  return FeatureMatrix::from_rows(rows);
}

}  // namespace

TEST_CASE("enumerate_pairs") {
  const auto one = enumerate_pairs(1);
  REQUIRE(one.size() == 1);
  CHECK(one.pairs[0] == PointPair{0, 0});
  CHECK(enumerate_pairs(4).size() == 10);
  CHECK(enumerate_pairs(150).size() == 11325);
  CHECK(enumerate_pairs(150, false).size() == 11175);
  CHECK(available_pairs(150, true) == 11325);

  const auto four = enumerate_pairs(4);
  CHECK(four.mode == SampleMode::Full);
  const auto ref = oracle::all_pairs(4);
  for (std::size_t c = 0; c < ref.size(); ++c) {
    CHECK(four.pairs[c].first == ref[c].first);
    CHECK(four.pairs[c].second == ref[c].second);
  }
}

TEST_CASE("sample_pairs saturates to full enumeration") {
  const auto a = sample_pairs(4, 100, 1, true);
  CHECK(a.mode == SampleMode::Full);
  CHECK(a.size() == 10);
  const auto b = sample_pairs(4, 10, 1, false);
  CHECK(b.mode == SampleMode::Full);
  REQUIRE(b.size() == 6);
  for (const auto& p : b.pairs) CHECK(p.first < p.second);
  CHECK_THROWS_AS(sample_pairs(4, 0, 1), std::invalid_argument);
}

TEST_CASE("sample_pairs is deterministic, sorted and without replacement") {
  const auto a = sample_pairs(1000, 50, 7);
  const auto b = sample_pairs(1000, 50, 7);
  CHECK(a.mode == SampleMode::Sampled);
  CHECK(a.pairs == b.pairs);
  CHECK(a.size() == 50);
  CHECK(std::is_sorted(a.pairs.begin(), a.pairs.end()));
  CHECK(std::adjacent_find(a.pairs.begin(), a.pairs.end()) == a.pairs.end());
  for (const auto& p : a.pairs) CHECK((p.first <= p.second && p.second < 1000));
  CHECK(sample_pairs(1000, 50, 8).pairs != a.pairs);

  const auto off = sample_pairs(30, 200, 5, false);
  for (const auto& p : off.pairs) CHECK(p.first < p.second);
}

TEST_CASE("sample_pairs is close to uniform over pairs") {
  // 15 pairs over N=5; draw 5 at a time, 6000 times.
  std::map<std::pair<int, int>, int> hits;
  const int trials = 6000;
  for (int t = 0; t < trials; ++t)
    for (const auto& p : sample_pairs(5, 5, static_cast<std::uint64_t>(t)).pairs) ++hits[{p.first, p.second}];
  CHECK(hits.size() == 15);
  const double expected = trials * 5.0 / 15.0;
  const double sd = std::sqrt(trials * (1.0 / 3.0) * (2.0 / 3.0));
  for (const auto& [pair, n] : hits) CHECK(std::abs(n - expected) < 4.0 * sd);
}

TEST_CASE("build_matrix on the three-clustering example") {
  const auto set = fixtures::tiny();
  const auto ps = enumerate_pairs(4);
  const auto fm = build_matrix(set, ps);
  REQUIRE(fm.rows() == 3);
  REQUIRE(fm.cols() == 10);
  const std::uint32_t names[10][2] = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const int row1[10] = {0, 0, 0, 0, 0, 1, 1, 1, 1, 0};
  const int row2[10] = {0, 0, 0, 1, 0, 1, 1, 1, 1, 1};
  for (int k = 0; k < 10; ++k) {
    const auto c = column_of(ps, names[k][0], names[k][1]);
    CHECK(fm.bit(0, c) == static_cast<bool>(row1[k]));
    CHECK(fm.bit(1, c) == static_cast<bool>(row2[k]));
    CHECK_FALSE(fm.bit(2, c));
  }
  CHECK_THROWS_AS(build_matrix(set, enumerate_pairs(5)), std::invalid_argument);
}

TEST_CASE("build_matrix agrees with the pair encoding on random sets") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    std::vector<oracle::Labels> rows;
    for (int r = 0; r < 5; ++r) rows.push_back(oracle::random_labels(rng, 12, 4, true));
    const auto ps = sample_pairs(12, 40, static_cast<std::uint64_t>(t));
    const auto fm = build_matrix(fixtures::to_set(rows), ps);
    const auto fm2 = build_matrix(fixtures::to_set(rows), sample_pairs(12, 40, static_cast<std::uint64_t>(t)));
    CHECK(fm == fm2);
    for (std::size_t r = 0; r < 5; ++r)
      for (std::size_t c = 0; c < fm.cols(); ++c)
        CHECK(fm.bit(r, c) == static_cast<bool>(oracle::pair_bit(rows[r], ps.pairs[c].first, ps.pairs[c].second)));
  }
}

TEST_CASE("duplicate clusterings give identical rows") {
  const auto fm = build_matrix(fixtures::to_set({fixtures::c2(), fixtures::c2()}), enumerate_pairs(4));
  CHECK(fm.row(0) == fm.row(1));
}

TEST_CASE("noise and singleton differ in exactly one diagonal column") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    auto a = oracle::random_labels(rng, 8, 3, true);
    const std::size_t x = rng() % 8;
    a[x] = -1;
    auto b = a;
    b[x] = 99;  // its own singleton cluster
    const auto ps = enumerate_pairs(8);
    const auto fm = build_matrix(fixtures::to_set({a, b}), ps);
    std::vector<std::size_t> diff;
    for (std::size_t c = 0; c < fm.cols(); ++c)
      if (fm.bit(0, c) != fm.bit(1, c)) diff.push_back(c);
    REQUIRE(diff.size() == 1);
    CHECK(ps.pairs[diff[0]] == PointPair{static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x)});
  }
}

TEST_CASE("group_columns on the three-clustering example") {
  const auto ps = enumerate_pairs(4);
  const auto fm = build_matrix(fixtures::tiny(), ps);
  const std::vector<std::size_t> all{0, 1, 2};
  const auto g = group_columns(fm, all);
  CHECK(g.nonconstant_count == 6);
  REQUIRE(g.top);
  CHECK(g.top_multiplicity() == 4);
  CHECK(g.groups[*g.top].pattern.to_string() == "110");
  std::set<std::size_t> cols;
  for (auto c : g.columns_of(*g.top)) cols.insert(c);
  CHECK(cols == std::set<std::size_t>{column_of(ps, 0, 2), column_of(ps, 0, 3), column_of(ps, 1, 2),
                                      column_of(ps, 1, 3)});

  const std::vector<std::size_t> two{0, 1};
  const auto h = group_columns(fm, two);
  CHECK(h.nonconstant_count == 2);
  REQUIRE(h.top);
  CHECK(h.top_multiplicity() == 2);
  CHECK(h.groups[*h.top].pattern.to_string() == "01");
  cols.clear();
  for (auto c : h.columns_of(*h.top)) cols.insert(c);
  CHECK(cols == std::set<std::size_t>{column_of(ps, 3, 3), column_of(ps, 2, 3)});

  for (std::size_t r = 0; r < 3; ++r) {
    const std::vector<std::size_t> one{r};
    const auto s = group_columns(fm, one);
    CHECK(s.nonconstant_count == 0);
    CHECK_FALSE(s.top);
  }
  CHECK_THROWS_AS(group_columns(fm, std::vector<std::size_t>{}), std::invalid_argument);
  CHECK_THROWS(group_columns(fm, std::vector<std::size_t>{0, 3}));
}

TEST_CASE("group_columns agrees with pairwise column comparison") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 400; ++t) {
    const std::size_t s = 1 + rng() % 8;
    const std::size_t n = 1 + rng() % 64;
    // Few distinct columns so ties and repeats are common.
    const std::size_t palette = 1 + rng() % 6;
    std::vector<std::vector<int>> cols_pool(palette, std::vector<int>(s));
    for (auto& col : cols_pool)
      for (auto& v : col) v = static_cast<int>(rng() % 2);
    oracle::Matrix m(s, std::vector<int>(n));
    for (std::size_t c = 0; c < n; ++c) {
      const auto& src = cols_pool[rng() % palette];
      for (std::size_t r = 0; r < s; ++r) m[r][c] = src[r];
    }
    const auto fm = from_oracle(m);

    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < s; ++r)
      if (rng() % 3 != 0) rows.push_back(r);
    if (rows.empty()) rows.push_back(0);

    const auto ref = oracle::group(m, rows);
    const auto got = group_columns(fm, rows);
    CHECK(got.nonconstant_count == ref.c);
    CHECK(got.top_multiplicity() == ref.m);
    CHECK(got.top.has_value() == ref.top.has_value());
    if (ref.top && got.top) {
      CHECK(got.groups[*got.top].pattern.to_string() == *ref.top);
      CHECK(got.columns_of(*got.top) == ref.top_columns);
    }
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const auto& g : got.groups) {
      counts[g.pattern.to_string()] += g.multiplicity;
      total += g.multiplicity;
      CHECK(g.constant == g.pattern.is_constant());
    }
    CHECK(counts == ref.counts);
    CHECK(total == n);
    CHECK(got.nonconstant_count <= n);
    if (got.top) CHECK(got.top_multiplicity() <= got.nonconstant_count);

    // Dropping a row never adds non-constant columns.
    if (rows.size() > 1) {
      auto fewer = rows;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(rng() % fewer.size()));
      CHECK(group_columns(fm, fewer).nonconstant_count <= got.nonconstant_count);
    }
  }
}

TEST_CASE("bit patterns") {
  const auto p = BitPattern::from_string("0110");
  CHECK(p.length() == 4);
  CHECK(p.count() == 2);
  CHECK_FALSE(p.is_constant());
  CHECK(p.to_string() == "0110");
  CHECK(BitPattern::from_string("000").is_constant());
  CHECK(BitPattern::from_string("111").is_constant());
  CHECK_THROWS(BitPattern::from_string("01x"));
  // Patterns longer than one word.
  std::string longp(130, '0');
  longp[129] = '1';
  CHECK(BitPattern::from_string(longp).to_string() == longp);
}
