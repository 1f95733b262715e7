#include "baitpress/features.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "baitpress/error.hpp"

namespace baitpress {

SparseMatrix::SparseMatrix(std::size_t n_cols) : n_cols_(n_cols), offsets_{0} {}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>>& rows, std::size_t n_cols) {
  SparseMatrix m(n_cols);
  SparseVector v;
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw std::invalid_argument("dense row has wrong width");
    v.indices.clear();
    v.values.clear();
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] != 0.0) {
        v.indices.push_back(static_cast<std::uint32_t>(j));
        v.values.push_back(r[j]);
      }
    }
    m.push_row(v);
  }
  return m;
}

void SparseMatrix::push_row(const SparseVector& row) { push_row(row.indices, row.values); }

void SparseMatrix::push_row(std::span<const std::uint32_t> indices, std::span<const double> values) {
  if (indices.size() != values.size()) throw std::invalid_argument("index/value length mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= n_cols_) throw std::invalid_argument("column index out of range");
    if (k > 0 && indices[k] <= indices[k - 1]) throw std::invalid_argument("column indices not strictly increasing");
  }
  indices_.insert(indices_.end(), indices.begin(), indices.end());
  values_.insert(values_.end(), values.begin(), values.end());
  offsets_.push_back(indices_.size());
}

SparseVector SparseMatrix::row_vector(std::size_t i) const {
  const auto r = row(i);
  return {{r.indices.begin(), r.indices.end()}, {r.values.begin(), r.values.end()}};
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> rows) const {
  SparseMatrix out(n_cols_);
  for (std::size_t i : rows) {
    const auto r = row(i);
    out.push_row(r.indices, r.values);
  }
  return out;
}

std::vector<std::string> extract_ngrams(const TokenSeq& seq) {
  std::vector<std::string> grams;
  const std::size_t n = seq.size();
  grams.reserve(n * 3);
  grams.insert(grams.end(), seq.begin(), seq.end());
  for (std::size_t i = 0; i + 1 < n; ++i) grams.push_back(seq[i] + ' ' + seq[i + 1]);
  for (std::size_t i = 0; i + 2 < n; ++i) grams.push_back(seq[i] + ' ' + seq[i + 1] + ' ' + seq[i + 2]);
  return grams;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::size_t min_df) : min_df_(min_df) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  terms_ = std::move(terms);
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
}

std::int64_t Vocabulary::index_of(const std::string& ngram) const {
  auto it = index_.find(ngram);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) out << terms_[i] << '\t' << i << '\n';
}

Vocabulary Vocabulary::load(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "vocabulary line without a tab");
    const std::string index = line.substr(tab + 1);
    if (index != std::to_string(terms.size())) throw ParseError(lineno, "vocabulary indices are not dense");
    terms.push_back(line.substr(0, tab));
  }
  if (!std::is_sorted(terms.begin(), terms.end())) throw InputError("vocabulary is not in lexicographic order");
  return Vocabulary(std::move(terms));
}

std::size_t default_min_df(std::size_t n_documents) noexcept { return n_documents > 5000 ? 2 : 1; }

Vocabulary fit_vocabulary(std::span<const TokenSeq> corpus, std::size_t min_df) {
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string> in_doc;
  for (const auto& doc : corpus) {
    in_doc.clear();
    for (auto& g : extract_ngrams(doc)) {
      if (in_doc.insert(g).second) ++df[std::move(g)];
    }
  }
  std::vector<std::string> kept;
  for (auto& [gram, count] : df) {
    if (count >= min_df) kept.push_back(gram);
  }
  return Vocabulary(std::move(kept), min_df);
}

SparseVector transform(const Vocabulary& vocab, const TokenSeq& seq) {
  std::map<std::uint32_t, double> counts;
  for (const auto& g : extract_ngrams(seq)) {
    if (const auto j = vocab.index_of(g); j >= 0) counts[static_cast<std::uint32_t>(j)] += 1.0;
  }
  SparseVector v;
  v.indices.reserve(counts.size());
  v.values.reserve(counts.size());
  for (const auto& [j, c] : counts) {
    v.indices.push_back(j);
    v.values.push_back(c);
  }
  return v;
}

SparseMatrix transform_matrix(const Vocabulary& vocab, std::span<const TokenSeq> corpus) {
  SparseMatrix m(vocab.n_features());
  for (const auto& doc : corpus) m.push_row(transform(vocab, doc));
  return m;
}

}  // namespace baitpress
