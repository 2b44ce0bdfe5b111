#include "hpref/feature_matrix.hpp"

#include <algorithm>
#include <utility>
#include <array>
#include <bit>
#include <limits>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "hpref/random.hpp"

namespace hpref {

std::string to_string(SampleMode mode) {
  switch (mode) {
    case SampleMode::Full: return "full";
    case SampleMode::Sampled: return "sampled";
    case SampleMode::Unspecified: break;
  }
  return "unspecified";
}

SampleMode sample_mode_from_string(const std::string& s) {
  if (s == "full") return SampleMode::Full;
  if (s == "sampled") return SampleMode::Sampled;
  if (s == "unspecified") return SampleMode::Unspecified;
  throw std::invalid_argument("unknown pair-sample mode '" + s + "'");
}

std::uint64_t available_pairs(std::size_t n, bool include_diagonal) {
  const std::uint64_t N = n;
  return include_diagonal ? N * (N + 1) / 2 : N * (N - (N > 0 ? 1 : 0)) / 2;
}

namespace {

// Lexicographic rank of the first pair in row i.
std::uint64_t row_offset(std::uint64_t i, std::uint64_t N, bool diag) {
  const std::uint64_t width = diag ? N : N - 1;
  return i * width - i * (i - (i > 0 ? 1 : 0)) / 2;
}

PointPair pair_at(std::uint64_t rank, std::uint64_t N, bool diag) {
  std::uint64_t lo = 0;
  std::uint64_t hi = diag ? N - 1 : N - 2;
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (row_offset(mid, N, diag) <= rank)
      lo = mid;
    else
      hi = mid - 1;
  }
  const std::uint64_t j = lo + (diag ? 0 : 1) + (rank - row_offset(lo, N, diag));
  return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(j)};
}

}  // namespace

PairSample enumerate_pairs(std::size_t dataset_size, bool include_diagonal) {
  if (dataset_size == 0) throw std::invalid_argument("cannot enumerate pairs of an empty dataset");
  if (dataset_size > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("dataset too large for 32-bit point indices");
  PairSample ps;
  ps.mode = SampleMode::Full;
  ps.dataset_size = dataset_size;
  ps.include_diagonal = include_diagonal;
  ps.pairs.reserve(available_pairs(dataset_size, include_diagonal));
  const auto N = static_cast<std::uint32_t>(dataset_size);
  for (std::uint32_t i = 0; i < N; ++i)
    for (std::uint32_t j = include_diagonal ? i : i + 1; j < N; ++j) ps.pairs.push_back({i, j});
  ps.requested = ps.pairs.size();
  return ps;
}

PairSample sample_pairs(std::size_t dataset_size, std::size_t n, std::uint64_t seed,
                        bool include_diagonal) {
  if (n == 0) throw std::invalid_argument("requested pair count must be positive");
  if (dataset_size == 0) throw std::invalid_argument("cannot sample pairs of an empty dataset");
  const std::uint64_t total = available_pairs(dataset_size, include_diagonal);
  if (n >= total) {
    PairSample ps = enumerate_pairs(dataset_size, include_diagonal);
    ps.seed = seed;
    ps.requested = n;
    return ps;
  }
  if (dataset_size > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("dataset too large for 32-bit point indices");

  // Floyd's algorithm: exactly n distinct ranks, uniform over n-subsets.
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(n * 2);
  std::vector<std::uint64_t> ranks;
  ranks.reserve(n);
  for (std::uint64_t j = total - n; j < total; ++j) {
    const std::uint64_t t = uniform_below(rng, j + 1);
    const std::uint64_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    ranks.push_back(pick);
  }
  std::sort(ranks.begin(), ranks.end());

  PairSample ps;
  ps.mode = SampleMode::Sampled;
  ps.seed = seed;
  ps.requested = n;
  ps.dataset_size = dataset_size;
  ps.include_diagonal = include_diagonal;
  ps.pairs.reserve(n);
  for (auto r : ranks) ps.pairs.push_back(pair_at(r, dataset_size, include_diagonal));
  return ps;
}

BitPattern BitPattern::from_string(const std::string& bits) {
  BitPattern p(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      p.set(i);
    else if (bits[i] != '0')
      throw std::invalid_argument("bit pattern may only contain '0' and '1'");
  }
  return p;
}

std::size_t BitPattern::count() const {
  std::size_t n = 0;
  for (auto w : words()) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::string BitPattern::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, PairSample pairs)
    : rows_(rows),
      cols_(cols),
      words_per_col_((rows + 63) / 64),
      bits_(cols * ((rows + 63) / 64), 0),
      pairs_(std::move(pairs)) {}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<std::uint8_t>>& rows) {
  if (rows.empty()) throw std::invalid_argument("matrix needs at least one row");
  const std::size_t cols = rows.front().size();
  PairSample ps;
  ps.mode = SampleMode::Unspecified;
  ps.requested = cols;
  FeatureMatrix fm(rows.size(), cols, std::move(ps));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c]) fm.bits_[c * fm.words_per_col_ + r / 64] |= std::uint64_t{1} << (r % 64);
  }
  return fm;
}

std::vector<std::uint8_t> FeatureMatrix::row(std::size_t r) const {
  std::vector<std::uint8_t> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = bit(r, c) ? 1 : 0;
  return out;
}

FeatureMatrix build_matrix(const ClusteringSet& set, const PairSample& pairs) {
  if (pairs.dataset_size != set.dataset_size())
    throw std::invalid_argument("pair sample is over " + std::to_string(pairs.dataset_size) +
                                " points but the clusterings label " +
                                std::to_string(set.dataset_size()));
  FeatureMatrix fm(set.size(), pairs.size(), pairs);
  const std::size_t W = fm.words_per_col_;
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto& labels = set[r].labels();
    const std::uint64_t mask = std::uint64_t{1} << (r % 64);
    std::uint64_t* word = fm.bits_.data() + r / 64;
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const ClusterLabel a = labels[pairs.pairs[c].first];
      const ClusterLabel b = labels[pairs.pairs[c].second];
      if (a.is_noise() || a != b) word[c * W] |= mask;
    }
  }
  return fm;
}

std::vector<std::size_t> ColumnGroups::columns_of(std::size_t group) const {
  std::vector<std::size_t> out;
  out.reserve(groups.at(group).multiplicity);
  for (std::size_t c = 0; c < group_of_column.size(); ++c)
    if (group_of_column[c] == group) out.push_back(c);
  return out;
}

namespace {

// Gathers the bits of selected rows from a packed column into a packed key,
// one byte of the column at a time through precomputed tables.
class RowGather {
 public:
  RowGather(std::span<const std::size_t> rows, std::size_t column_words) {
    static_assert(std::endian::native == std::endian::little, "byte tables assume little-endian words");
    // Position of each selected row within the key.
    std::vector<std::int64_t> rank(column_words * 64, -1);
    for (std::size_t k = 0; k < rows.size(); ++k) rank[rows[k]] = static_cast<std::int64_t>(k);
    const std::size_t bytes = column_words * 8;
    tables_.resize(bytes * 256);
    for (std::size_t b = 0; b < bytes; ++b) {
      // Selected rows in one byte are consecutive in the key.
      std::int64_t base = -1;
      for (std::size_t bit = 0; bit < 8 && base < 0; ++bit) base = rank[b * 8 + bit];
      if (base < 0) continue;
      active_.push_back(b);
      Entry* t = &tables_[b * 256];
      for (std::size_t v = 0; v < 256; ++v) {
        std::uint64_t out = 0;
        for (std::size_t bit = 0; bit < 8; ++bit)
          if ((v >> bit & 1) && rank[b * 8 + bit] >= 0) out |= std::uint64_t{1} << (rank[b * 8 + bit] - base);
        t[v] = {out, static_cast<std::uint32_t>(base)};
      }
    }
  }

  void operator()(std::span<const std::uint64_t> column, std::uint64_t* key, std::size_t key_words) const {
    std::fill(key, key + key_words, 0);
    const auto* bytes = reinterpret_cast<const unsigned char*>(column.data());
    for (auto b : active_) {
      const Entry& e = tables_[b * 256 + bytes[b]];
      if (e.bits == 0) continue;
      const std::size_t w = e.offset / 64, shift = e.offset % 64;
      key[w] |= e.bits << shift;
      if (shift > 56 && w + 1 < key_words) key[w + 1] |= e.bits >> (64 - shift);
    }
  }

 private:
  struct Entry {
    std::uint64_t bits = 0;   // up to 8 bits, right-aligned
    std::uint32_t offset = 0; // key position of the lowest selected row
  };
  std::vector<Entry> tables_;
  std::vector<std::size_t> active_;
};

}  // namespace

ColumnGroups group_columns(const FeatureMatrix& fm, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("row subset must be nonempty");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= fm.rows())
      throw std::invalid_argument("row index " + std::to_string(rows[k]) + " out of range");
    if (k > 0 && rows[k] <= rows[k - 1])
      throw std::invalid_argument("row subset must be sorted and free of duplicates");
  }

  ColumnGroups out;
  out.rows.assign(rows.begin(), rows.end());
  const std::size_t n = fm.cols();
  out.group_of_column.resize(n);

  const std::size_t R = rows.size();
  const std::size_t W = (R + 63) / 64;
  const std::size_t last_bits = R % 64;
  const std::uint64_t last_mask = last_bits == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << last_bits) - 1;

  // One record per column: the restricted pattern in W words, then the
  // column index. Equal patterns are brought together by an LSD radix sort,
  // whose sequential passes keep the cost linear in n at any size.
  const std::size_t stride = W + 1;
  std::vector<std::uint64_t> rec(n * stride);
  const bool identity = R == fm.rows();  // sorted and distinct, so this means all rows
  std::optional<RowGather> gather;
  if (!identity) gather.emplace(rows, fm.words_per_column());
  for (std::size_t c = 0; c < n; ++c) {
    std::uint64_t* r = &rec[c * stride];
    if (identity)
      std::copy_n(fm.column(c).begin(), W, r);
    else
      (*gather)(fm.column(c), r, W);
    r[W - 1] &= last_mask;
    r[W] = c;
  }

  const std::size_t digits = W * 8;
  std::vector<std::array<std::size_t, 256>> hist(digits);
  for (auto& h : hist) h.fill(0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = 0; d < digits; ++d) ++hist[d][(rec[c * stride + d / 8] >> (8 * (d % 8))) & 0xFF];
  std::vector<std::uint64_t> tmp(n * stride);
  for (std::size_t d = 0; d < digits; ++d) {
    auto& h = hist[d];
    if (std::find(h.begin(), h.end(), n) != h.end()) continue;  // one value everywhere: nothing to do
    std::size_t pos = 0;
    for (auto& v : h) pos += std::exchange(v, pos);
    for (std::size_t c = 0; c < n; ++c) {
      const std::uint64_t* r = &rec[c * stride];
      std::copy_n(r, stride, &tmp[h[(r[d / 8] >> (8 * (d % 8))) & 0xFF]++ * stride]);
    }
    rec.swap(tmp);
  }

  // Runs of equal patterns; stability leaves each run in column order.
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> run_of(n);
  std::vector<std::size_t> run_start;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t* r = &rec[i * stride];
    if (i == 0 || !std::equal(r, r + W, r - stride)) run_start.push_back(i);
    run_of[r[W]] = static_cast<std::uint32_t>(run_start.size() - 1);
  }
  const std::size_t runs = run_start.size();

  // Number groups by first occurrence.
  std::vector<std::uint32_t> group_of_run(runs, kUnset);
  std::vector<std::uint32_t> run_of_group;
  run_of_group.reserve(runs);
  for (std::size_t c = 0; c < n; ++c) {
    const auto r = run_of[c];
    if (group_of_run[r] == kUnset) {
      group_of_run[r] = static_cast<std::uint32_t>(run_of_group.size());
      run_of_group.push_back(r);
    }
    out.group_of_column[c] = group_of_run[r];
  }

  out.groups.resize(runs);
  for (std::size_t g = 0; g < runs; ++g) {
    const std::size_t r = run_of_group[g];
    const std::size_t begin = run_start[r];
    const std::size_t end = r + 1 < runs ? run_start[r + 1] : n;
    const std::uint64_t* k = &rec[begin * stride];
    ColumnGroup& group = out.groups[g];
    group.first_column = k[W];
    group.multiplicity = end - begin;
    group.pattern = BitPattern(R);
    std::copy(k, k + W, group.pattern.words().begin());
    // Constant means all zeros or all ones over the restriction.
    bool all_zero = true;
    bool all_one = true;
    for (std::size_t w = 0; w < W; ++w) {
      const std::uint64_t m = (w + 1 == W) ? last_mask : ~std::uint64_t{0};
      if ((k[w] & m) != 0) all_zero = false;
      if ((k[w] & m) != m) all_one = false;
    }
    group.constant = all_zero || all_one;
    if (group.constant) continue;
    out.nonconstant_count += group.multiplicity;
    // Groups are in first-occurrence order, so strict > keeps the earliest.
    if (!out.top || group.multiplicity > out.groups[*out.top].multiplicity) out.top = g;
  }
  return out;
}

}  // namespace hpref
