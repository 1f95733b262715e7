#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "baitpress/error.hpp"
#include "baitpress/extra_trees.hpp"
#include "baitpress/folds.hpp"
#include "baitpress/stacking.hpp"
#include "fixture.hpp"

using namespace baitpress;

namespace {

MetaFeatures random_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols; ++c) names.push_back("f" + std::to_string(c));
  MetaFeatures m(names, rows);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : m.values) v = u(rng);
  return m;
}

std::vector<double> column(const MetaFeatures& m, std::size_t c) {
  std::vector<double> out;
  for (std::size_t r = 0; r < m.n_rows(); ++r) out.push_back(m.at(r, c));
  return out;
}

double training_mse(const ExtraTreesModel& model, const MetaFeatures& x, const std::vector<double>& y) {
  const auto p = predict_extratrees(model, x);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  return s / static_cast<double>(y.size());
}

StackConfig small_config() {
  StackConfig cfg;
  cfg.trees.n_trees = 20;
  return cfg;
}

}  // namespace

TEST(Folds, Sizes) {
  const auto ten = make_folds(10, 5, 1);
  for (std::size_t f = 0; f < 5; ++f) EXPECT_EQ(ten.rows_in(f).size(), 2u);
  const auto eleven = make_folds(11, 5, 1);
  std::multiset<std::size_t> sizes;
  for (std::size_t f = 0; f < 5; ++f) sizes.insert(eleven.rows_in(f).size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 2, 2, 2, 3}));
}

TEST(Folds, PartitionAndDeterminism) {
  const auto a = make_folds(37, 4, 9);
  EXPECT_EQ(a.assignment, make_folds(37, 4, 9).assignment);
  EXPECT_NE(a.assignment, make_folds(37, 4, 10).assignment);
  std::vector<std::size_t> all;
  for (std::size_t f = 0; f < 4; ++f) {
    const auto in = a.rows_in(f), out = a.rows_outside(f);
    EXPECT_EQ(in.size() + out.size(), 37u);
    all.insert(all.end(), in.begin(), in.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(37);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(all, expected);
}

TEST(Folds, Errors) {
  EXPECT_THROW(make_folds(4, 5, 0), std::invalid_argument);
  EXPECT_THROW(make_folds(10, 1, 0), std::invalid_argument);
}

TEST(ExtraTrees, ConstantTargetIsSingleLeaf) {
  const auto x = random_features(30, 4, 1);
  const std::vector<double> y(30, 0.7);
  const auto m = train_extratrees(x, y, {10, 2, 3});
  for (const auto& t : m.trees) ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(training_mse(m, x, y), 0.0);
  for (double v : feature_importance(m)) EXPECT_EQ(v, 0.0);
}

TEST(ExtraTrees, SingleSampleIsSingleLeaf) {
  const auto x = random_features(1, 3, 1);
  const auto m = train_extratrees(x, std::vector<double>{0.4}, {5, 2, 0});
  for (const auto& t : m.trees) EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(predict_extratrees(m, x)[0], 0.4);
}

TEST(ExtraTrees, FitsAColumnClosely) {
  const auto x = random_features(200, 5, 2);
  const auto y = column(x, 2);
  const auto m = train_extratrees(x, y, {30, 2, 5});
  EXPECT_LT(training_mse(m, x, y), 1e-3);
}

TEST(ExtraTrees, ThresholdsStrictlyInsideNodeRange) {
  const auto x = random_features(80, 3, 4);
  const auto y = column(x, 0);
  const auto m = train_extratrees(x, y, {5, 2, 1});
  for (const auto& tree : m.trees) {
    // Route every training row and check each split against the rows reaching it.
    std::vector<std::vector<std::size_t>> reach(tree.size());
    for (std::size_t r = 0; r < x.n_rows(); ++r) {
      std::size_t n = 0;
      while (true) {
        reach[n].push_back(r);
        if (tree[n].is_leaf()) break;
        n = x.at(r, tree[n].feature) <= tree[n].threshold ? tree[n].left : tree[n].right;
      }
    }
    for (std::size_t n = 0; n < tree.size(); ++n) {
      EXPECT_EQ(reach[n].size(), tree[n].n_samples);
      EXPECT_GE(tree[n].n_samples, 1u);
      if (tree[n].is_leaf()) continue;
      double lo = HUGE_VAL, hi = -HUGE_VAL;
      for (std::size_t r : reach[n]) {
        lo = std::min(lo, x.at(r, tree[n].feature));
        hi = std::max(hi, x.at(r, tree[n].feature));
      }
      EXPECT_GT(tree[n].threshold, lo);
      EXPECT_LT(tree[n].threshold, hi);
    }
  }
}

TEST(ExtraTrees, ImportancesSumToOne) {
  const auto x = random_features(100, 6, 5);
  const auto y = column(x, 1);
  const auto imp = feature_importance(train_extratrees(x, y, {25, 5, 2}));
  ASSERT_EQ(imp.size(), 6u);
  for (double v : imp) EXPECT_GE(v, 0.0);
  EXPECT_NEAR(std::accumulate(imp.begin(), imp.end(), 0.0), 1.0, 1e-9);
  EXPECT_EQ(std::max_element(imp.begin(), imp.end()) - imp.begin(), 1);
}

TEST(ExtraTrees, HandBuiltForests) {
  ExtraTreesModel m;
  m.n_features = 4;
  m.trees.push_back({TreeNode{-1, 0, 0, 0, 0.0, 1}});
  m.trees.push_back({TreeNode{-1, 0, 0, 0, 1.0, 1}});
  const auto x = random_features(3, 4, 0);
  for (double p : predict_extratrees(m, x)) EXPECT_EQ(p, 0.5);

  ExtraTreesModel split;
  split.n_features = 4;
  split.trees.push_back({TreeNode{3, 0.5, 1, 2, 0.5, 2}, TreeNode{-1, 0, 0, 0, 0.0, 1}, TreeNode{-1, 0, 0, 0, 1.0, 1}});
  EXPECT_EQ(feature_importance(split), (std::vector<double>{0, 0, 0, 1}));
}

TEST(ExtraTrees, TreeOrderAndMeanTreeInvariance) {
  const auto x = random_features(60, 3, 6);
  const auto y = column(x, 0);
  auto m = train_extratrees(x, y, {8, 5, 7});
  const auto base = predict_extratrees(m, x);
  std::reverse(m.trees.begin(), m.trees.end());
  const auto reversed = predict_extratrees(m, x);
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(reversed[i], base[i], 1e-12);
  // Adding a single-leaf tree that predicts the current output leaves it unchanged.
  const auto row0 = std::vector<double>(x.row(0).begin(), x.row(0).end());
  m.trees.push_back({TreeNode{-1, 0, 0, 0, base[0], 1}});
  EXPECT_NEAR(predict_extratrees(m, x)[0], base[0], 1e-12);
}

TEST(ExtraTrees, DeterministicAcrossThreadCounts) {
  const auto x = random_features(120, 4, 8);
  const auto y = column(x, 3);
  EXPECT_EQ(train_extratrees(x, y, {16, 5, 3}, 1), train_extratrees(x, y, {16, 5, 3}, 4));
}

TEST(ExtraTrees, SaveLoadAndErrors) {
  const auto x = random_features(50, 3, 9);
  const auto m = train_extratrees(x, column(x, 0), {4, 5, 1});
  std::stringstream buf;
  m.save(buf);
  EXPECT_EQ(buf.str().substr(0, 4), "BPET");
  EXPECT_EQ(ExtraTreesModel::load(buf), m);
  EXPECT_THROW(train_extratrees(MetaFeatures{}, {}, {}), std::invalid_argument);
  EXPECT_THROW(predict_extratrees(m, random_features(2, 4, 0)), std::invalid_argument);
}

TEST(Oof, ConstantTargetGivesConstantColumn) {
  const auto& ds = fixture::mini_dataset();
  const auto tokens = preprocess_posts(ds.posts, Stopwords::builtin());
  const std::vector<std::vector<double>> y = {std::vector<double>(ds.posts.size(), 0.25)};
  const std::vector<double> c = {0.1};
  const auto plan = make_folds(ds.posts.size(), 5, 7);
  const auto cols = oof_predictions(tokens[0], y, c, plan, std::nullopt, {});
  for (double v : cols[0]) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Oof, FoldsWithOneRowRejected) {
  const std::vector<TokenSeq> docs = {{"a"}, {"b"}, {"c"}};
  const std::vector<std::vector<double>> y = {{0, 1, 0}};
  const std::vector<double> c = {1.0};
  EXPECT_THROW(oof_predictions(docs, y, c, make_folds(3, 2, 0), std::nullopt, {}), std::invalid_argument);
}

TEST(Oof, LabelsInsideFoldDoNotLeak) {
  const auto& ds = fixture::mini_dataset();
  const auto plan = make_folds(ds.posts.size(), 5, 7);
  const auto base = oof_predictions(ds, FieldView::post_text, Target::mean, 0.1, plan, Stopwords::builtin());
  for (std::size_t f = 0; f < plan.n_folds; ++f) {
    Dataset corrupted = ds;
    for (std::size_t r : plan.rows_in(f)) {
      auto& l = corrupted.labels->at(ds.posts[r].id);
      l.mean = 1.0 - l.mean;
    }
    const auto changed = oof_predictions(corrupted, FieldView::post_text, Target::mean, 0.1, plan,
                                         Stopwords::builtin());
    for (std::size_t r : plan.rows_in(f)) EXPECT_EQ(changed[r], base[r]) << "fold " << f << " row " << r;
  }
}

TEST(MetaColumns, Layout) {
  const auto mean = meta_columns(FeatureSet::mean);
  ASSERT_EQ(mean.size(), 7u);
  EXPECT_EQ(mean[0], "postText mean");
  const auto ms = meta_columns(FeatureSet::mean_std);
  ASSERT_EQ(ms.size(), 14u);
  EXPECT_EQ(ms[7], "postText std");
  EXPECT_EQ(ms[13], "allConcatenated std");
  EXPECT_GT(meta_columns(FeatureSet::mean_std_external).size(), 14u);
}

TEST(FeatureSetNames, RoundTrip) {
  for (auto f : {FeatureSet::mean, FeatureSet::mean_std, FeatureSet::mean_std_external})
    EXPECT_EQ(parse_feature_set(to_string(f)), f);
  EXPECT_EQ(parse_feature_set("mean+std"), FeatureSet::mean_std);
  EXPECT_FALSE(parse_feature_set("std"));
}

TEST(DefaultC, TablesValues) {
  EXPECT_EQ(default_c(FieldView::post_text, Target::mean), 0.1);
  EXPECT_EQ(default_c(FieldView::target_keywords, Target::mean), 0.5);
  EXPECT_EQ(default_c(FieldView::post_text, Target::std), 0.01);
  StackConfig cfg;
  cfg.c_overrides[{FieldView::post_text, Target::mean}] = 2.0;
  EXPECT_EQ(cfg.c_for(FieldView::post_text, Target::mean), 2.0);
  EXPECT_EQ(cfg.c_for(FieldView::target_title, Target::mean), 0.01);
}

TEST(TrainStacked, EndToEndOnMiniCorpus) {
  const auto& ds = fixture::mini_dataset();
  const auto result = train_stacked(ds, small_config(), Stopwords::builtin());
  EXPECT_EQ(result.model.base_models.size(), 14u);
  EXPECT_EQ(result.model.columns.size(), 14u);
  EXPECT_EQ(result.report.base.size(), 14u);
  EXPECT_EQ(result.report.oof_columns.size(), 14u);
  EXPECT_GT(result.report.ensemble.mse, 0.0);
  EXPECT_LT(result.report.ensemble.mse, 0.1);
  double total = 0.0;
  for (const auto& [name, v] : result.report.importances) total += v;
  EXPECT_NEAR(total, 1.0, 1e-9);

  const auto scores = score_posts(result.model, ds.posts, Stopwords::builtin());
  ASSERT_EQ(scores.size(), ds.posts.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EXPECT_EQ(scores[i].id, ds.posts[i].id);
    EXPECT_GE(scores[i].score, 0.0);
    EXPECT_LE(scores[i].score, 1.0);
  }
  EXPECT_TRUE(score_posts(result.model, {}, Stopwords::builtin()).empty());
  EXPECT_THROW(score_posts(result.model, ds.posts, Stopwords::from_text("x\n")), CompatError);
}

TEST(TrainStacked, MeanOnlyHasSevenColumns) {
  auto cfg = small_config();
  cfg.features = FeatureSet::mean;
  const auto result = train_stacked(fixture::mini_dataset(), cfg, Stopwords::builtin());
  EXPECT_EQ(result.model.columns.size(), 7u);
  EXPECT_EQ(result.model.base_models.size(), 7u);
}

TEST(TrainStacked, ExternalColumns) {
  auto cfg = small_config();
  cfg.features = FeatureSet::mean_std_external;
  std::vector<ExternalExample> ext;
  for (int i = 0; i < 40; ++i) {
    ext.push_back({{i % 2 ? "You will never guess these " + std::to_string(i) + " pictures" : "Council meets on budget"},
                   i % 2 ? 1 : -1});
  }
  EXPECT_THROW(train_stacked(fixture::mini_dataset(), cfg, Stopwords::builtin()), InputError);
  const auto result = train_stacked(fixture::mini_dataset(), cfg, Stopwords::builtin(), ext);
  EXPECT_EQ(result.model.columns.size(), meta_columns(FeatureSet::mean_std_external).size());
  ASSERT_TRUE(result.report.external_auc);
  EXPECT_GE(*result.report.external_auc, 0.0);
  EXPECT_LE(*result.report.external_auc, 1.0);
  fixture::TempDir tmp;
  result.model.save(tmp.path() / "m");
  const auto back = StackedModel::load(tmp.path() / "m");
  const auto a = score_posts(result.model, fixture::mini_dataset().posts, Stopwords::builtin());
  const auto b = score_posts(back, fixture::mini_dataset().posts, Stopwords::builtin());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].score, b[i].score);
}

TEST(ParseExternal, Formats) {
  std::istringstream in(R"({"text":"a","label":1})" "\n" R"({"text":["b","c"],"label":false})" "\n"
                        R"({"text":"d","label":0})" "\n");
  const auto ex = parse_external(in);
  ASSERT_EQ(ex.size(), 3u);
  EXPECT_EQ(ex[1].texts.size(), 2u);
  EXPECT_EQ(ex[1].label, -1);
  EXPECT_EQ(ex[2].label, -1);
  std::istringstream bad(R"({"text":"a","label":3})");
  EXPECT_THROW(parse_external(bad), ParseError);
}

TEST(StackedModel, SaveLoadScoresIdentically) {
  const auto& ds = fixture::mini_dataset();
  const auto result = train_stacked(ds, small_config(), Stopwords::builtin());
  fixture::TempDir tmp;
  const auto dir = tmp.path() / "model";
  result.model.save(dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_FALSE(std::filesystem::exists(tmp.path() / "model.partial"));
  const auto back = StackedModel::load(dir);
  const auto a = score_posts(result.model, ds.posts, Stopwords::builtin());
  const auto b = score_posts(back, ds.posts, Stopwords::builtin());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].score, b[i].score);

  auto manifest = fixture::read_text(dir / "manifest.json");
  const auto pos = manifest.find("\"formatVersion\": 1");
  ASSERT_NE(pos, std::string::npos);
  manifest.replace(pos, 18, "\"formatVersion\": 7");
  fixture::write_text((dir / "manifest.json").string(), manifest);
  EXPECT_THROW(StackedModel::load(dir), CompatError);
  EXPECT_THROW(StackedModel::load(tmp.path() / "nothing"), InputError);
}

TEST(TrainStacked, DeterministicAcrossJobs) {
  const auto& ds = fixture::mini_dataset();
  auto cfg = small_config();
  const auto one = train_stacked(ds, cfg, Stopwords::builtin());
  cfg.jobs = 4;
  const auto four = train_stacked(ds, cfg, Stopwords::builtin());
  EXPECT_EQ(one.report.oof_columns, four.report.oof_columns);
  EXPECT_EQ(one.model.meta, four.model.meta);
  EXPECT_EQ(one.report.ensemble.mse, four.report.ensemble.mse);
}
