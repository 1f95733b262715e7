#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "baitpress/corpus.hpp"
#include "baitpress/eval.hpp"
#include "baitpress/extra_trees.hpp"
#include "baitpress/features.hpp"
#include "baitpress/folds.hpp"
#include "baitpress/linear.hpp"
#include "baitpress/text.hpp"

namespace baitpress {

/// Which base-model outputs feed the meta-regressor.
enum class FeatureSet { mean, mean_std, mean_std_external };

const char* to_string(FeatureSet f) noexcept;
std::optional<FeatureSet> parse_feature_set(std::string_view name) noexcept;

using BaseKey = std::pair<FieldView, Target>;

/// Best C per field and target from the per-field cross-validation tables.
double default_c(FieldView view, Target target) noexcept;

/// Labeled text for the optional external classifier.
struct ExternalExample {
  std::vector<std::string> texts;
  int label = 1;  // +1 clickbait, -1 not
};

/// Line-delimited JSON: {"text": string | [string], "label": 1 | -1 | 0 | true | false}.
std::vector<ExternalExample> parse_external(std::istream& in);

struct StackConfig {
  FeatureSet features = FeatureSet::mean_std;
  std::size_t n_folds = 5;
  std::uint64_t seed = 42;
  std::map<BaseKey, double> c_overrides;
  std::optional<std::size_t> min_df;  // unset: default_min_df(training rows)
  ExtraTreesParams trees{};
  SolverConfig solver{};
  double external_c = 1.0;
  double external_holdout = 0.2;
  std::size_t jobs = 1;

  double c_for(FieldView view, Target target) const;
  /// Digest of every setting that changes the trained model (jobs excluded).
  std::string digest() const;
};

/// Token sequences of every post, one vector per view (indexed by FieldView).
using ViewTokens = std::array<std::vector<TokenSeq>, kAllViews.size()>;

ViewTokens preprocess_posts(std::span<const Post> posts, const Stopwords& stopwords, std::size_t jobs = 1);

/// Out-of-fold predictions for one view: for each fold the vocabulary and one
/// SVR per target are fit on the other folds only. Returns one column per
/// entry of `targets`, in row order.
std::vector<std::vector<double>> oof_predictions(std::span<const TokenSeq> docs,
                                                 const std::vector<std::vector<double>>& targets,
                                                 std::span<const double> c_values, const FoldPlan& plan,
                                                 std::optional<std::size_t> min_df, const SolverConfig& solver,
                                                 std::uint64_t seed_stream = 0);

/// Single-target convenience over a labeled dataset.
std::vector<double> oof_predictions(const Dataset& ds, FieldView view, Target target, double c,
                                    const FoldPlan& plan, const Stopwords& stopwords,
                                    const SolverConfig& solver = {}, std::optional<std::size_t> min_df = std::nullopt);

/// Linear classifier trained on an external labeled corpus, applied to each
/// text view to add meta-feature columns.
struct ExternalClassifier {
  Vocabulary vocab;
  LinearModel model;
};

struct StackedModel {
  FeatureSet features = FeatureSet::mean_std;
  std::string stopwords_digest;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::size_t n_folds = 5;
  std::array<Vocabulary, kAllViews.size()> vocabularies;
  std::map<BaseKey, LinearModel> base_models;
  std::optional<ExternalClassifier> external;
  ExtraTreesModel meta;
  std::vector<std::string> columns;

  /// Writes the model directory (via a temporary sibling and a rename).
  void save(const std::filesystem::path& dir) const;
  /// Throws CompatError when the directory was written by another format version.
  static StackedModel load(const std::filesystem::path& dir);
};

/// Meta-feature column names for a feature set, e.g. "postText mean".
std::vector<std::string> meta_columns(FeatureSet features);

struct BaseModelReport {
  FieldView view;
  Target target;
  double c = 0.0;
  RegressionReport oof;  // out-of-fold MSE of the base model
};

struct StackReport {
  std::vector<BaseModelReport> base;
  /// Cross-validated MSE of the meta-regressor on the out-of-fold features
  /// (same folds), predictions clamped to [0, 1].
  RegressionReport ensemble;
  std::vector<std::pair<std::string, double>> importances;  // of the final meta model
  std::optional<double> external_auc;
  std::vector<std::vector<double>> oof_columns;  // per meta column, row order
};

struct StackResult {
  StackedModel model;
  StackReport report;
};

/// Full training: out-of-fold meta-features, meta-model CV, then refit of
/// the meta-regressor and every base model on all rows.
StackResult train_stacked(const Dataset& ds, const StackConfig& config, const Stopwords& stopwords,
                          std::span<const ExternalExample> external = {});

struct ScoredPost {
  std::string id;
  double score = 0.0;
};

/// Scores clamped to [0, 1], input order preserved. Throws CompatError if the
/// stopword list differs from the one the model was trained with.
std::vector<ScoredPost> score_posts(const StackedModel& model, std::span<const Post> posts,
                                    const Stopwords& stopwords, std::size_t jobs = 1);

}  // namespace baitpress
