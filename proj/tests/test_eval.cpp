#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "baitpress/eval.hpp"

using namespace baitpress;

namespace {

// Pair counting: wins plus half ties over all positive-negative pairs.
double auc_by_pairs(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != -1) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

}  // namespace

TEST(Mse, Examples) {
  const std::vector<double> a = {0.1, 0.7};
  EXPECT_EQ(mse(a, a), 0.0);
  EXPECT_DOUBLE_EQ(mse(std::vector<double>{0, 1}, std::vector<double>{1, 0}), 1.0);
  EXPECT_NEAR(mse(std::vector<double>{0.2, 0.4}, std::vector<double>{0.0, 1.0}), 0.2, 1e-15);
  EXPECT_THROW(mse(std::vector<double>{1}, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(mse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(Mse, DetectsTranslation) {
  const std::vector<double> t = {0.2, 0.5, 0.9};
  std::vector<double> shifted = t;
  for (auto& v : shifted) v += 0.01;
  EXPECT_GT(mse(shifted, t), mse(t, t));
}

TEST(Mse, ReportRmse) {
  const auto r = regression_report(std::vector<double>{0.2, 0.4}, std::vector<double>{0.0, 1.0}, 1.5);
  EXPECT_EQ(r.n, 2u);
  EXPECT_NEAR(r.rmse * r.rmse, r.mse, 1e-12);
  EXPECT_EQ(r.wall_time_seconds, 1.5);
}

TEST(Auc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{-1, -1, 1, 1}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{-1, 1, -1, 1}), 0.5);
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<int> y = {-1, -1, 1, 1};
  EXPECT_DOUBLE_EQ(auc_by_pairs(s, y), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc(s, y), 0.75);
  EXPECT_THROW(roc_auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), std::invalid_argument);
}

TEST(Auc, AgreesWithPairCountingAndProperties) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> level(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < 25; ++i) {
      s.push_back(level(rng) / 6.0);  // coarse levels force ties
      y.push_back(i % 3 == 0 ? 1 : -1);
    }
    EXPECT_NEAR(roc_auc(s, y), auc_by_pairs(s, y), 1e-12);
    std::vector<double> cubed;
    for (double v : s) cubed.push_back(v * v * v + 2.0);
    EXPECT_NEAR(roc_auc(cubed, y), roc_auc(s, y), 1e-12);
  }
  std::vector<double> distinct;
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) {
    distinct.push_back(std::sin(i * 1.7));
    y.push_back(i % 2 ? 1 : -1);
  }
  std::vector<double> negated;
  for (double v : distinct) negated.push_back(-v);
  EXPECT_NEAR(roc_auc(negated, y), 1.0 - roc_auc(distinct, y), 1e-12);
}

TEST(Classification, Counts) {
  const auto r = classification_report(std::vector<double>{-1, 0.5, 2, -0.1}, std::vector<int>{-1, 1, -1, 1});
  EXPECT_EQ(r.tp, 1u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.tn, 1u);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  EXPECT_NEAR(r.precision * (r.tp + r.fp), r.tp, 1e-12);
  EXPECT_GE(r.auc, 0.0);
  EXPECT_LE(r.auc, 1.0);
}

TEST(Tables, HeaderOnlyWhenEmpty) {
  std::ostringstream out;
  write_table_text(out, {});
  const auto text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find("MSE"), std::string::npos);
  std::ostringstream jl;
  write_table_jsonl(jl, {});
  EXPECT_TRUE(jl.str().empty());
}

TEST(Tables, Rows) {
  const std::vector<ResultRow> rows = {{"postText mean", 0.039, std::sqrt(0.039), 1.25, 0.1},
                                       {"ensemble", 0.0326, std::sqrt(0.0326), 3.0, std::nullopt}};
  std::ostringstream out;
  write_table_text(out, rows);
  const auto text = out.str();
  EXPECT_NE(text.find("postText mean"), std::string::npos);
  EXPECT_NE(text.find("0.03900"), std::string::npos);
  std::ostringstream jl;
  write_table_jsonl(jl, rows);
  std::istringstream lines(jl.str());
  std::string line;
  std::getline(lines, line);
  const auto first = nlohmann::json::parse(line);
  EXPECT_EQ(first["name"], "postText mean");
  EXPECT_EQ(first["bestC"], 0.1);
  std::getline(lines, line);
  EXPECT_TRUE(nlohmann::json::parse(line)["bestC"].is_null());
}
