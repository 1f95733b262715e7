#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "baitpress/text.hpp"

namespace baitpress {

/// Sparse row: strictly increasing column indices with positive values.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return indices.size(); }
  bool operator==(const SparseVector&) const = default;
};

/// Compressed sparse row matrix with a column count fixed at construction.
class SparseMatrix {
 public:
  struct Row {
    std::span<const std::uint32_t> indices;
    std::span<const double> values;

    double dot(std::span<const double> dense) const noexcept {
      double s = 0.0;
      for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * dense[indices[k]];
      return s;
    }
    double squared_norm() const noexcept {
      double s = 0.0;
      for (double v : values) s += v * v;
      return s;
    }
  };

  explicit SparseMatrix(std::size_t n_cols = 0);

  /// Builds from dense rows; zeros are dropped.
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& rows, std::size_t n_cols);

  /// Appends a row. Indices must be strictly increasing and < n_cols().
  void push_row(const SparseVector& row);
  void push_row(std::span<const std::uint32_t> indices, std::span<const double> values);

  std::size_t n_rows() const noexcept { return offsets_.size() - 1; }
  std::size_t n_cols() const noexcept { return n_cols_; }
  std::size_t nnz() const noexcept { return indices_.size(); }

  Row row(std::size_t i) const noexcept {
    const std::size_t b = offsets_[i], e = offsets_[i + 1];
    return {std::span(indices_).subspan(b, e - b), std::span(values_).subspan(b, e - b)};
  }
  SparseVector row_vector(std::size_t i) const;

  /// Rows `rows` (in the given order) as a new matrix.
  SparseMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_cols_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

/// All contiguous 1-, 2- and 3-grams (space joined), unigrams first.
std::vector<std::string> extract_ngrams(const TokenSeq& seq);

/// N-gram to column mapping. Columns are assigned in lexicographic order of
/// the n-grams, so a vocabulary is fully determined by its term set.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> terms, std::size_t min_df = 1);

  std::size_t n_features() const noexcept { return terms_.size(); }
  std::size_t min_df() const noexcept { return min_df_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::string& term(std::size_t index) const { return terms_.at(index); }
  /// Column of `ngram`, or -1 when absent.
  std::int64_t index_of(const std::string& ngram) const;

  /// "ngram<TAB>index" lines in index order.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in);

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t min_df_ = 1;
};

/// min_df used when none is configured: 2 above 5,000 documents, else 1.
std::size_t default_min_df(std::size_t n_documents) noexcept;

/// Keeps n-grams that occur in at least `min_df` documents.
Vocabulary fit_vocabulary(std::span<const TokenSeq> corpus, std::size_t min_df);

/// Raw n-gram counts over the vocabulary; unknown n-grams are ignored.
SparseVector transform(const Vocabulary& vocab, const TokenSeq& seq);

SparseMatrix transform_matrix(const Vocabulary& vocab, std::span<const TokenSeq> corpus);

}  // namespace baitpress
