#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpref/clustering.hpp"

namespace hpref {

/// Unordered pair of point indices, stored with first <= second.
struct PointPair {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  friend constexpr auto operator<=>(const PointPair&, const PointPair&) = default;
};

enum class SampleMode { Full, Sampled, Unspecified };

std::string to_string(SampleMode mode);
SampleMode sample_mode_from_string(const std::string& s);

/// The columns of a feature matrix: distinct pairs in lexicographic order,
/// together with how they were obtained so a run can be replayed.
struct PairSample {
  std::vector<PointPair> pairs;
  SampleMode mode = SampleMode::Full;
  std::uint64_t seed = 0;
  std::size_t requested = 0;  // n asked for; equals pairs.size() in Full mode
  std::size_t dataset_size = 0;
  bool include_diagonal = true;

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const PairSample&, const PairSample&) = default;
};

/// Number of pairs available over N points (N(N+1)/2 with the diagonal).
std::uint64_t available_pairs(std::size_t dataset_size, bool include_diagonal);

/// All pairs (i <= j) in lexicographic order.
PairSample enumerate_pairs(std::size_t dataset_size, bool include_diagonal = true);

/// n distinct pairs drawn uniformly without replacement and sorted.
/// Saturates to enumerate_pairs() when n covers every available pair.
PairSample sample_pairs(std::size_t dataset_size, std::size_t n, std::uint64_t seed,
                        bool include_diagonal = true);

/// Fixed-length bit vector used for column patterns restricted to a row set.
class BitPattern {
 public:
  BitPattern() = default;
  explicit BitPattern(std::size_t length) : length_(length) {
    if (word_count() > kInline) heap_.assign(word_count(), 0);
  }
  static BitPattern from_string(const std::string& bits);

  std::size_t length() const { return length_; }
  bool get(std::size_t i) const { return (data()[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { data()[i / 64] |= std::uint64_t{1} << (i % 64); }
  std::size_t count() const;
  bool is_constant() const { return length_ == 0 || count() == 0 || count() == length_; }
  std::span<const std::uint64_t> words() const { return {data(), word_count()}; }
  std::span<std::uint64_t> words() { return {data(), word_count()}; }

  /// '0'/'1' characters, bit 0 first.
  std::string to_string() const;

  friend bool operator==(const BitPattern& a, const BitPattern& b) {
    return a.length_ == b.length_ && std::ranges::equal(a.words(), b.words());
  }

 private:
  // Patterns up to 128 bits live inline; grouping makes one per distinct column.
  static constexpr std::size_t kInline = 2;
  std::size_t word_count() const { return (length_ + 63) / 64; }
  const std::uint64_t* data() const { return word_count() > kInline ? heap_.data() : inline_.data(); }
  std::uint64_t* data() { return word_count() > kInline ? heap_.data() : inline_.data(); }

  std::size_t length_ = 0;
  std::array<std::uint64_t, kInline> inline_{};
  std::vector<std::uint64_t> heap_;
};

/// s x n binary matrix M(S): rows are clusterings, columns sampled pairs.
/// Stored column-major as packed bit columns of s bits each.
class FeatureMatrix {
 public:
  /// Matrix given directly by its rows (row r, column c -> rows[r][c]).
  static FeatureMatrix from_rows(const std::vector<std::vector<std::uint8_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_column() const { return words_per_col_; }
  const PairSample& pairs() const { return pairs_; }

  bool bit(std::size_t row, std::size_t col) const {
    return (bits_[col * words_per_col_ + row / 64] >> (row % 64)) & 1u;
  }
  std::span<const std::uint64_t> column(std::size_t col) const {
    return {bits_.data() + col * words_per_col_, words_per_col_};
  }
  std::vector<std::uint8_t> row(std::size_t r) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  friend FeatureMatrix build_matrix(const ClusteringSet&, const PairSample&);
  FeatureMatrix(std::size_t rows, std::size_t cols, PairSample pairs);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_per_col_ = 0;
  std::vector<std::uint64_t> bits_;
  PairSample pairs_;
};

/// bits[r][c] = pair_feature(S[r], pairs[c]).
FeatureMatrix build_matrix(const ClusteringSet& set, const PairSample& pairs);

/// Columns of a matrix grouped by their bit pattern restricted to a row
/// subset. Groups are kept in order of first occurrence.
struct ColumnGroup {
  BitPattern pattern;  // over the restricted rows, in row order
  std::size_t multiplicity = 0;
  std::size_t first_column = 0;
  bool constant = true;
};

struct ColumnGroups {
  std::vector<std::size_t> rows;
  std::vector<ColumnGroup> groups;
  std::vector<std::uint32_t> group_of_column;
  std::size_t nonconstant_count = 0;  // c
  std::optional<std::size_t> top;     // index into groups

  /// Multiplicity m of the winning non-constant pattern, 0 when absent.
  std::size_t top_multiplicity() const { return top ? groups[*top].multiplicity : 0; }
  std::vector<std::size_t> columns_of(std::size_t group) const;
};

/// Group columns by restricted pattern, count non-constant columns and pick
/// the most repeated non-constant pattern. Ties go to the pattern whose
/// lowest column index is smallest. Linear in cols() * rows.size().
ColumnGroups group_columns(const FeatureMatrix& fm, std::span<const std::size_t> rows);

}  // namespace hpref
