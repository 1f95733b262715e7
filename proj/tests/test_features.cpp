#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "baitpress/features.hpp"
#include "fixture.hpp"

using namespace baitpress;
using Strings = std::vector<std::string>;

TEST(Ngrams, Definition) {
  EXPECT_EQ(extract_ngrams({"a", "b", "c"}), (Strings{"a", "b", "c", "a b", "b c", "a b c"}));
  EXPECT_EQ(extract_ngrams({"[n]", "pictur"}), (Strings{"[n]", "pictur", "[n] pictur"}));
  EXPECT_TRUE(extract_ngrams({}).empty());
  EXPECT_EQ(extract_ngrams({"x", "y", "z", "w"}).size(), 4u + 3u + 2u);
}

TEST(Vocabulary, MinDf) {
  const std::vector<TokenSeq> corpus = {{"a", "b"}, {"a", "c"}};
  EXPECT_EQ(fit_vocabulary(corpus, 2).terms(), Strings{"a"});
  EXPECT_EQ(fit_vocabulary(corpus, 3).n_features(), 0u);
  EXPECT_EQ(fit_vocabulary({}, 1).n_features(), 0u);
}

TEST(Vocabulary, LexicographicIndices) {
  const std::vector<TokenSeq> corpus = {{"a", "b"}, {"a", "b"}};
  const auto v = fit_vocabulary(corpus, 1);
  EXPECT_EQ(v.terms(), (Strings{"a", "a b", "b"}));
  EXPECT_EQ(v.index_of("a"), 0);
  EXPECT_EQ(v.index_of("a b"), 1);
  EXPECT_EQ(v.index_of("b"), 2);
  EXPECT_EQ(v.index_of("c"), -1);
}

TEST(Vocabulary, DocumentFrequencyNotTermFrequency) {
  const std::vector<TokenSeq> corpus = {{"a", "a", "a"}, {"b"}};
  EXPECT_TRUE(fit_vocabulary(corpus, 2).terms().empty());
}

TEST(Vocabulary, InsertionOrderIrrelevant) {
  EXPECT_EQ(Vocabulary({"b", "a", "c"}), Vocabulary({"c", "b", "a"}));
  EXPECT_EQ(Vocabulary({"b", "a", "c"}).index_of("a"), 0);
}

TEST(Vocabulary, DefaultMinDf) {
  EXPECT_EQ(default_min_df(5000), 1u);
  EXPECT_EQ(default_min_df(5001), 2u);
  EXPECT_EQ(default_min_df(0), 1u);
}

TEST(Vocabulary, SaveLoadRoundTrip) {
  const auto v = fit_vocabulary(std::vector<TokenSeq>{{"[n]", "pictur", "whoa"}, {"wat"}}, 1);
  std::stringstream buf;
  v.save(buf);
  EXPECT_EQ(buf.str().substr(0, 6), "[n]\t0\n");
  const auto back = Vocabulary::load(buf);
  EXPECT_EQ(back, v);
  std::istringstream bad("b\t0\na\t1\n");
  EXPECT_ANY_THROW(Vocabulary::load(bad));
  std::istringstream gap("a\t0\nb\t2\n");
  EXPECT_ANY_THROW(Vocabulary::load(gap));
}

TEST(Transform, Counts) {
  const Vocabulary v({"a", "b"});
  const auto x = transform(v, {"a", "a", "c"});
  EXPECT_EQ(x.indices, std::vector<std::uint32_t>{0});
  EXPECT_EQ(x.values, std::vector<double>{2});
  EXPECT_EQ(transform(v, {}).nnz(), 0u);
  const Vocabulary three({"a", "a b", "b"});
  const auto y = transform(three, {"a", "b"});
  EXPECT_EQ(y.indices, (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(y.values, (std::vector<double>{1, 1, 1}));
}

TEST(Transform, MatrixShapeAndRows) {
  const Vocabulary v({"a", "b"});
  const std::vector<TokenSeq> none;
  const auto empty = transform_matrix(v, none);
  EXPECT_EQ(empty.n_rows(), 0u);
  EXPECT_EQ(empty.n_cols(), 2u);
  const std::vector<TokenSeq> one = {{"b", "a", "b"}};
  EXPECT_EQ(transform_matrix(v, one).row_vector(0), transform(v, one[0]));
}

// Brute force over the mini corpus: per document, count vocabulary n-grams
// with a std::map and compare against the matrix.
TEST(Transform, MiniCorpusAgainstBruteForce) {
  const auto& posts = fixture::mini_dataset().posts;
  for (FieldView view : kAllViews) {
    std::vector<TokenSeq> docs;
    for (const auto& p : posts) docs.push_back(preprocess_field(p, view, Stopwords::builtin()));
    const auto vocab = fit_vocabulary(docs, 2);
    const auto m = transform_matrix(vocab, docs);
    ASSERT_EQ(m.n_rows(), docs.size());
    ASSERT_EQ(m.n_cols(), vocab.n_features());

    std::size_t expected_nnz = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
      std::map<std::string, int> counts;
      std::size_t in_vocab = 0;
      const auto& d = docs[i];
      for (std::size_t n = 1; n <= 3; ++n) {
        for (std::size_t s = 0; s + n <= d.size(); ++s) {
          std::string g = d[s];
          for (std::size_t k = 1; k < n; ++k) g += " " + d[s + k];
          if (vocab.index_of(g) >= 0) {
            ++counts[g];
            ++in_vocab;
          }
        }
      }
      expected_nnz += counts.size();
      const auto row = m.row_vector(i);
      EXPECT_EQ(row, transform(vocab, d));
      EXPECT_DOUBLE_EQ(std::accumulate(row.values.begin(), row.values.end(), 0.0), static_cast<double>(in_vocab));
      for (std::size_t k = 0; k < row.nnz(); ++k) {
        EXPECT_EQ(row.values[k], counts.at(vocab.term(row.indices[k])));
        if (k) EXPECT_LT(row.indices[k - 1], row.indices[k]);
      }
    }
    EXPECT_EQ(m.nnz(), expected_nnz) << to_string(view);
  }
}

TEST(SparseMatrix, Validation) {
  SparseMatrix m(3);
  const std::vector<std::uint32_t> unsorted = {2, 1};
  const std::vector<double> vals = {1, 1};
  EXPECT_ANY_THROW(m.push_row(unsorted, vals));
  const std::vector<std::uint32_t> out_of_range = {0, 3};
  EXPECT_ANY_THROW(m.push_row(out_of_range, vals));
  const auto d = SparseMatrix::from_dense({{0, 1, 0}, {2, 0, 3}}, 3);
  EXPECT_EQ(d.nnz(), 3u);
  const std::vector<std::size_t> pick = {1, 0};
  const auto s = d.select_rows(pick);
  EXPECT_EQ(s.row_vector(0), d.row_vector(1));
  EXPECT_EQ(s.row_vector(1), d.row_vector(0));
  const std::vector<double> dense = {1, 1, 1};
  EXPECT_DOUBLE_EQ(d.row(1).dot(dense), 5.0);
  EXPECT_DOUBLE_EQ(d.row(1).squared_norm(), 13.0);
}
