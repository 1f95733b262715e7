#include "baitpress/stacking.hpp"

#include <cmath>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "baitpress/error.hpp"
#include "baitpress/io.hpp"
#include "baitpress/parallel.hpp"

namespace baitpress {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormatName = "baitpress-stacked";
constexpr int kFormatVersion = 1;

// Seed streams, kept apart so that no two sub-tasks share a generator.
constexpr std::uint64_t kStreamOof = 1000;
constexpr std::uint64_t kStreamMetaCv = 7100;
constexpr std::uint64_t kStreamMetaFinal = 7001;
constexpr std::uint64_t kStreamRefit = 5000;
constexpr std::uint64_t kStreamExternal = 9000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t view_index(FieldView v) { return static_cast<std::size_t>(v); }

std::vector<Target> targets_for(FeatureSet f) {
  if (f == FeatureSet::mean) return {Target::mean};
  return {Target::mean, Target::std};
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::vector<double> gather(std::span<const double> v, std::span<const std::size_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(v[r]);
  return out;
}

// Mean over folds of the per-fold MSE.
double fold_mean_mse(std::span<const double> pred, std::span<const double> truth, const FoldPlan& plan) {
  double total = 0.0;
  for (std::size_t f = 0; f < plan.n_folds; ++f) {
    const auto rows = plan.rows_in(f);
    total += mse(gather(pred, rows), gather(truth, rows));
  }
  return total / static_cast<double>(plan.n_folds);
}

std::vector<double> external_margins(const ExternalClassifier& ext, std::span<const TokenSeq> docs) {
  return predict(ext.model, transform_matrix(ext.vocab, docs));
}

struct ExternalFit {
  ExternalClassifier classifier;
  std::optional<double> holdout_auc;
};

ExternalFit train_external(std::span<const ExternalExample> examples, const StackConfig& config,
                           const Stopwords& stopwords) {
  if (examples.empty()) throw InputError("feature set mean+std+external needs an external corpus");
  std::vector<TokenSeq> docs(examples.size());
  parallel_for(examples.size(), config.jobs,
               [&](std::size_t i) { docs[i] = preprocess_texts(examples[i].texts, stopwords); });

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(config.seed, kStreamExternal));
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_holdout = static_cast<std::size_t>(config.external_holdout * static_cast<double>(examples.size()));
  std::vector<std::size_t> holdout(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_holdout));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_holdout), order.end());
  std::sort(holdout.begin(), holdout.end());
  std::sort(train.begin(), train.end());

  std::vector<TokenSeq> train_docs;
  std::vector<int> train_y;
  for (std::size_t i : train) {
    train_docs.push_back(docs[i]);
    train_y.push_back(examples[i].label);
  }
  ExternalFit fit;
  fit.classifier.vocab = fit_vocabulary(train_docs, config.min_df.value_or(default_min_df(train_docs.size())));
  SolverConfig solver = config.solver;
  solver.seed = derive_seed(config.seed, kStreamExternal + 1);
  fit.classifier.model = train_svc(transform_matrix(fit.classifier.vocab, train_docs), train_y, config.external_c, solver);

  std::vector<TokenSeq> test_docs;
  std::vector<int> test_y;
  for (std::size_t i : holdout) {
    test_docs.push_back(docs[i]);
    test_y.push_back(examples[i].label);
  }
  const bool both = std::count(test_y.begin(), test_y.end(), 1) > 0 && std::count(test_y.begin(), test_y.end(), -1) > 0;
  if (both) fit.holdout_auc = roc_auc(external_margins(fit.classifier, test_docs), test_y);
  return fit;
}

json key_json(const BaseKey& k, double c) {
  return {{"view", to_string(k.first)}, {"target", to_string(k.second)}, {"c", c}};
}

std::string model_file(const BaseKey& k) {
  return std::string("models/") + to_string(k.first) + "." + to_string(k.second) + ".bin";
}

std::string vocab_file(FieldView v) { return std::string("vocab/") + to_string(v) + ".tsv"; }

template <typename Writer>
void write_into(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  writer(out);
  if (!out) throw InputError("write failed for " + path.string());
}

template <typename T, typename Loader>
T read_from(const fs::path& path, Loader&& loader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CompatError("model directory is missing " + path.string());
  return loader(in);
}

}  // namespace

const char* to_string(FeatureSet f) noexcept {
  switch (f) {
    case FeatureSet::mean: return "mean";
    case FeatureSet::mean_std: return "mean+std";
    case FeatureSet::mean_std_external: return "mean+std+external";
  }
  return "?";
}

std::optional<FeatureSet> parse_feature_set(std::string_view name) noexcept {
  if (name == "mean") return FeatureSet::mean;
  if (name == "mean+std") return FeatureSet::mean_std;
  if (name == "mean+std+external") return FeatureSet::mean_std_external;
  return std::nullopt;
}

double default_c(FieldView view, Target target) noexcept {
  // Best C per field from 5-fold cross-validation on the 19,538-post corpus.
  static constexpr std::array<double, 7> kMean = {0.1, 0.01, 0.005, 0.5, 0.001, 0.001, 0.001};
  static constexpr std::array<double, 7> kStd = {0.01, 0.01, 0.005, 0.01, 0.001, 0.001, 0.001};
  return (target == Target::mean ? kMean : kStd)[view_index(view)];
}

double StackConfig::c_for(FieldView view, Target target) const {
  if (auto it = c_overrides.find({view, target}); it != c_overrides.end()) return it->second;
  return default_c(view, target);
}

std::string StackConfig::digest() const {
  json cs = json::array();
  for (FieldView v : kAllViews) {
    for (Target t : {Target::mean, Target::std}) cs.push_back(key_json({v, t}, c_for(v, t)));
  }
  const json j = {
      {"features", to_string(features)},
      {"nFolds", n_folds},
      {"seed", seed},
      {"c", cs},
      {"minDf", min_df ? json(*min_df) : json(nullptr)},
      {"nTrees", trees.n_trees},
      {"minSamplesSplit", trees.min_samples_split},
      {"tolerance", solver.tolerance},
      {"maxIterations", solver.max_iterations},
      {"externalC", external_c},
      {"externalHoldout", external_holdout},
  };
  return io::fnv1a_hex(j.dump());
}

std::vector<ExternalExample> parse_external(std::istream& in) {
  std::vector<ExternalExample> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    ExternalExample ex;
    const auto text = obj.find("text");
    if (text == obj.end()) throw ParseError(lineno, "missing \"text\"");
    if (text->is_string()) {
      ex.texts.push_back(text->get<std::string>());
    } else if (text->is_array()) {
      for (const auto& t : *text) {
        if (!t.is_string()) throw ParseError(lineno, "\"text\" holds a non-string");
        ex.texts.push_back(t.get<std::string>());
      }
    } else {
      throw ParseError(lineno, "\"text\" must be a string or array");
    }
    const auto label = obj.find("label");
    if (label == obj.end()) throw ParseError(lineno, "missing \"label\"");
    if (label->is_boolean()) {
      ex.label = label->get<bool>() ? 1 : -1;
    } else if (label->is_number()) {
      const double v = label->get<double>();
      if (v == 1.0) ex.label = 1;
      else if (v == 0.0 || v == -1.0) ex.label = -1;
      else throw ParseError(lineno, "label must be 1, 0 or -1");
    } else {
      throw ParseError(lineno, "label must be a number or boolean");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

ViewTokens preprocess_posts(std::span<const Post> posts, const Stopwords& stopwords, std::size_t jobs) {
  ViewTokens tokens;
  for (auto& v : tokens) v.resize(posts.size());
  parallel_for(posts.size(), jobs, [&](std::size_t i) {
    for (FieldView v : kAllViews) tokens[view_index(v)][i] = preprocess_field(posts[i], v, stopwords);
  });
  return tokens;
}

std::vector<std::vector<double>> oof_predictions(std::span<const TokenSeq> docs,
                                                 const std::vector<std::vector<double>>& targets,
                                                 std::span<const double> c_values, const FoldPlan& plan,
                                                 std::optional<std::size_t> min_df, const SolverConfig& solver,
                                                 std::uint64_t seed_stream) {
  if (c_values.size() != targets.size()) throw std::invalid_argument("one C per target required");
  if (plan.assignment.size() != docs.size()) throw std::invalid_argument("fold plan does not match the documents");
  for (const auto& y : targets) {
    if (y.size() != docs.size()) throw std::invalid_argument("target length does not match the documents");
  }
  std::vector<std::vector<double>> out(targets.size(), std::vector<double>(docs.size(), 0.0));
  for (std::size_t f = 0; f < plan.n_folds; ++f) {
    const auto test = plan.rows_in(f);
    const auto train = plan.rows_outside(f);
    if (test.size() < 2) throw std::invalid_argument("fold " + std::to_string(f) + " has fewer than 2 rows");

    std::vector<TokenSeq> train_docs, test_docs;
    for (std::size_t i : train) train_docs.push_back(docs[i]);
    for (std::size_t i : test) test_docs.push_back(docs[i]);
    const auto vocab = fit_vocabulary(train_docs, min_df.value_or(default_min_df(train_docs.size())));
    const auto x_train = transform_matrix(vocab, train_docs);
    const auto x_test = transform_matrix(vocab, test_docs);

    for (std::size_t t = 0; t < targets.size(); ++t) {
      SolverConfig cfg = solver;
      cfg.seed = derive_seed(solver.seed, seed_stream * 64 + f * 4 + t);
      const auto model = train_svr(x_train, gather(targets[t], train), c_values[t], 0.0, cfg);
      const auto pred = predict(model, x_test);
      for (std::size_t k = 0; k < test.size(); ++k) out[t][test[k]] = pred[k];
    }
  }
  return out;
}

std::vector<double> oof_predictions(const Dataset& ds, FieldView view, Target target, double c,
                                    const FoldPlan& plan, const Stopwords& stopwords, const SolverConfig& solver,
                                    std::optional<std::size_t> min_df) {
  std::vector<TokenSeq> docs;
  docs.reserve(ds.posts.size());
  for (const auto& p : ds.posts) docs.push_back(preprocess_field(p, view, stopwords));
  const std::array<double, 1> cs = {c};
  return oof_predictions(docs, {targets(ds, target)}, cs, plan, min_df, solver)[0];
}

std::vector<std::string> meta_columns(FeatureSet features) {
  std::vector<std::string> cols;
  for (Target t : targets_for(features)) {
    for (FieldView v : kAllViews) cols.push_back(std::string(to_string(v)) + " " + to_string(t));
  }
  if (features == FeatureSet::mean_std_external) {
    for (FieldView v : kAllViews) cols.push_back(std::string(to_string(v)) + " external");
  }
  return cols;
}

StackResult train_stacked(const Dataset& ds, const StackConfig& config, const Stopwords& stopwords,
                          std::span<const ExternalExample> external) {
  if (!ds.labeled()) throw InputError("training needs a truth file");
  const std::size_t n = ds.posts.size();
  const auto target_list = targets_for(config.features);
  std::vector<std::vector<double>> y_by_target;
  for (Target t : target_list) y_by_target.push_back(targets(ds, t));
  const auto& y_mean = y_by_target[0];

  const ViewTokens tokens = preprocess_posts(ds.posts, stopwords, config.jobs);
  const FoldPlan plan = make_folds(n, config.n_folds, config.seed);

  StackResult result;
  StackReport& report = result.report;
  StackedModel& model = result.model;
  model.features = config.features;
  model.stopwords_digest = stopwords.digest();
  model.config_digest = config.digest();
  model.seed = config.seed;
  model.n_folds = config.n_folds;
  model.columns = meta_columns(config.features);

  // Out-of-fold base predictions, one view per task.
  std::vector<std::vector<std::vector<double>>> oof(kAllViews.size());
  std::vector<double> oof_seconds(kAllViews.size());
  parallel_for(kAllViews.size(), config.jobs, [&](std::size_t vi) {
    const auto start = Clock::now();
    std::vector<double> cs;
    for (Target t : target_list) cs.push_back(config.c_for(kAllViews[vi], t));
    oof[vi] = oof_predictions(tokens[vi], y_by_target, cs, plan, config.min_df, config.solver, kStreamOof + vi);
    oof_seconds[vi] = seconds_since(start);
  });

  std::optional<ExternalFit> ext;
  if (config.features == FeatureSet::mean_std_external) {
    ext = train_external(external, config, stopwords);
    report.external_auc = ext->holdout_auc;
  }

  MetaFeatures meta(model.columns, n);
  std::size_t col = 0;
  for (std::size_t t = 0; t < target_list.size(); ++t) {
    for (std::size_t vi = 0; vi < kAllViews.size(); ++vi, ++col) {
      for (std::size_t i = 0; i < n; ++i) meta.at(i, col) = oof[vi][t][i];
      BaseModelReport base{kAllViews[vi], target_list[t], config.c_for(kAllViews[vi], target_list[t]), {}};
      base.oof = regression_report(oof[vi][t], y_by_target[t], oof_seconds[vi]);
      base.oof.mse = fold_mean_mse(oof[vi][t], y_by_target[t], plan);
      base.oof.rmse = std::sqrt(base.oof.mse);
      report.base.push_back(base);
    }
  }
  if (ext) {
    for (std::size_t vi = 0; vi < kAllViews.size(); ++vi, ++col) {
      const auto margins = external_margins(ext->classifier, tokens[vi]);
      for (std::size_t i = 0; i < n; ++i) meta.at(i, col) = margins[i];
    }
  }
  for (std::size_t c = 0; c < meta.n_cols(); ++c) {
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = meta.at(i, c);
    report.oof_columns.push_back(std::move(column));
  }

  // Cross-validated meta-regressor on the same folds.
  {
    const auto start = Clock::now();
    std::vector<double> cv_pred(n, 0.0);
    for (std::size_t f = 0; f < plan.n_folds; ++f) {
      const auto train = plan.rows_outside(f), test = plan.rows_in(f);
      ExtraTreesParams params = config.trees;
      params.seed = derive_seed(config.seed, kStreamMetaCv + f);
      const auto et = train_extratrees(meta.select_rows(train), gather(y_mean, train), params, config.jobs);
      const auto pred = predict_extratrees(et, meta.select_rows(test));
      for (std::size_t k = 0; k < test.size(); ++k) cv_pred[test[k]] = clamp01(pred[k]);
    }
    report.ensemble = regression_report(cv_pred, y_mean, seconds_since(start));
    report.ensemble.mse = fold_mean_mse(cv_pred, y_mean, plan);
    report.ensemble.rmse = std::sqrt(report.ensemble.mse);
  }

  ExtraTreesParams final_params = config.trees;
  final_params.seed = derive_seed(config.seed, kStreamMetaFinal);
  model.meta = train_extratrees(meta, y_mean, final_params, config.jobs);
  const auto importance = feature_importance(model.meta);
  for (std::size_t c = 0; c < importance.size(); ++c) report.importances.emplace_back(model.columns[c], importance[c]);

  // Refit vocabularies and base models on every row for inference.
  std::vector<std::map<BaseKey, LinearModel>> refit(kAllViews.size());
  parallel_for(kAllViews.size(), config.jobs, [&](std::size_t vi) {
    const FieldView view = kAllViews[vi];
    model.vocabularies[vi] = fit_vocabulary(tokens[vi], config.min_df.value_or(default_min_df(n)));
    const auto x = transform_matrix(model.vocabularies[vi], tokens[vi]);
    for (std::size_t t = 0; t < target_list.size(); ++t) {
      SolverConfig cfg = config.solver;
      cfg.seed = derive_seed(config.solver.seed, (kStreamRefit + vi) * 64 + t);
      auto m = train_svr(x, y_by_target[t], config.c_for(view, target_list[t]), 0.0, cfg);
      m.view = view;
      m.target = target_list[t] == Target::mean ? ModelTarget::mean : ModelTarget::std;
      refit[vi].emplace(BaseKey{view, target_list[t]}, std::move(m));
    }
  });
  for (auto& r : refit) model.base_models.merge(r);
  if (ext) model.external = std::move(ext->classifier);
  return result;
}

std::vector<ScoredPost> score_posts(const StackedModel& model, std::span<const Post> posts,
                                    const Stopwords& stopwords, std::size_t jobs) {
  if (stopwords.digest() != model.stopwords_digest) {
    throw CompatError("stopword list " + stopwords.digest() + " differs from the model's " + model.stopwords_digest);
  }
  std::vector<ScoredPost> out;
  if (posts.empty()) return out;
  const ViewTokens tokens = preprocess_posts(posts, stopwords, jobs);
  const std::size_t n = posts.size();
  MetaFeatures meta(model.columns, n);
  std::size_t col = 0;
  for (Target t : targets_for(model.features)) {
    for (std::size_t vi = 0; vi < kAllViews.size(); ++vi, ++col) {
      const auto& lm = model.base_models.at({kAllViews[vi], t});
      const auto pred = predict(lm, transform_matrix(model.vocabularies[vi], tokens[vi]));
      for (std::size_t i = 0; i < n; ++i) meta.at(i, col) = pred[i];
    }
  }
  if (model.features == FeatureSet::mean_std_external) {
    if (!model.external) throw CompatError("model lacks its external classifier");
    for (std::size_t vi = 0; vi < kAllViews.size(); ++vi, ++col) {
      const auto margins = external_margins(*model.external, tokens[vi]);
      for (std::size_t i = 0; i < n; ++i) meta.at(i, col) = margins[i];
    }
  }
  const auto scores = predict_extratrees(model.meta, meta);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({posts[i].id, clamp01(scores[i])});
  return out;
}

void StackedModel::save(const fs::path& dir) const {
  fs::path tmp = dir;
  tmp += ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "vocab");
  fs::create_directories(tmp / "models");

  json vocabs = json::array();
  for (FieldView v : kAllViews) {
    const auto& vocab = vocabularies[view_index(v)];
    write_into(tmp / vocab_file(v), [&](std::ostream& out) { vocab.save(out); });
    vocabs.push_back({{"view", to_string(v)}, {"file", vocab_file(v)}, {"nFeatures", vocab.n_features()}});
  }
  json models = json::array();
  for (const auto& [key, m] : base_models) {
    write_into(tmp / model_file(key), [&](std::ostream& out) { m.save(out); });
    json entry = key_json(key, m.c);
    entry["file"] = model_file(key);
    models.push_back(entry);
  }
  write_into(tmp / "meta.trees", [&](std::ostream& out) { meta.save(out); });
  json ext = nullptr;
  if (external) {
    fs::create_directories(tmp / "external");
    write_into(tmp / "external/vocab.tsv", [&](std::ostream& out) { external->vocab.save(out); });
    write_into(tmp / "external/model.bin", [&](std::ostream& out) { external->model.save(out); });
    ext = {{"vocab", "external/vocab.tsv"}, {"model", "external/model.bin"}, {"c", external->model.c}};
  }
  const json manifest = {
      {"format", kFormatName},
      {"formatVersion", kFormatVersion},
      {"featureSet", to_string(features)},
      {"seed", seed},
      {"nFolds", n_folds},
      {"stopwordsDigest", stopwords_digest},
      {"configDigest", config_digest},
      {"columns", columns},
      {"vocabularies", vocabs},
      {"baseModels", models},
      {"meta", {{"file", "meta.trees"}, {"nTrees", meta.trees.size()}, {"minSamplesSplit", meta.params.min_samples_split}}},
      {"external", ext},
  };
  write_into(tmp / "manifest.json", [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });

  fs::remove_all(dir);
  fs::rename(tmp, dir);
}

StackedModel StackedModel::load(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw InputError("no model found at " + dir.string());
  json manifest;
  try {
    manifest = json::parse(io::read_file(manifest_path));
  } catch (const json::exception& e) {
    throw CompatError(std::string("unreadable model manifest: ") + e.what());
  }
  if (manifest.value("format", "") != kFormatName) throw CompatError("not a baitpress model directory");
  if (manifest.value("formatVersion", -1) != kFormatVersion) {
    throw CompatError("model format version " + manifest["formatVersion"].dump() + " is not supported (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  StackedModel m;
  try {
    const auto features = parse_feature_set(manifest.at("featureSet").get<std::string>());
    if (!features) throw CompatError("unknown feature set in manifest");
    m.features = *features;
    m.seed = manifest.at("seed").get<std::uint64_t>();
    m.n_folds = manifest.at("nFolds").get<std::size_t>();
    m.stopwords_digest = manifest.at("stopwordsDigest").get<std::string>();
    m.config_digest = manifest.at("configDigest").get<std::string>();
    m.columns = manifest.at("columns").get<std::vector<std::string>>();
    for (const auto& v : manifest.at("vocabularies")) {
      const auto view = parse_view(v.at("view").get<std::string>());
      if (!view) throw CompatError("unknown view in manifest");
      m.vocabularies[view_index(*view)] =
          read_from<Vocabulary>(dir / v.at("file").get<std::string>(), [](std::istream& in) { return Vocabulary::load(in); });
    }
    for (const auto& b : manifest.at("baseModels")) {
      const auto view = parse_view(b.at("view").get<std::string>());
      const auto target_name = b.at("target").get<std::string>();
      if (!view || (target_name != "mean" && target_name != "std")) throw CompatError("unknown base model in manifest");
      const Target target = target_name == "mean" ? Target::mean : Target::std;
      auto lm = read_from<LinearModel>(dir / b.at("file").get<std::string>(),
                                       [](std::istream& in) { return LinearModel::load(in); });
      if (lm.n_features() != m.vocabularies[view_index(*view)].n_features()) {
        throw CompatError(std::string("model ") + to_string(*view) + "/" + target_name +
                          " does not match its vocabulary size");
      }
      m.base_models.emplace(BaseKey{*view, target}, std::move(lm));
    }
    m.meta = read_from<ExtraTreesModel>(dir / manifest.at("meta").at("file").get<std::string>(),
                                        [](std::istream& in) { return ExtraTreesModel::load(in); });
    if (const auto& e = manifest.at("external"); !e.is_null()) {
      ExternalClassifier ext;
      ext.vocab = read_from<Vocabulary>(dir / e.at("vocab").get<std::string>(),
                                        [](std::istream& in) { return Vocabulary::load(in); });
      ext.model = read_from<LinearModel>(dir / e.at("model").get<std::string>(),
                                         [](std::istream& in) { return LinearModel::load(in); });
      if (ext.model.n_features() != ext.vocab.n_features()) throw CompatError("external model/vocabulary mismatch");
      m.external = std::move(ext);
    }
  } catch (const json::exception& e) {
    throw CompatError(std::string("malformed model manifest: ") + e.what());
  }
  if (m.meta.n_features != m.columns.size()) throw CompatError("meta model does not match the manifest columns");
  for (Target t : targets_for(m.features)) {
    for (FieldView v : kAllViews) {
      if (!m.base_models.contains({v, t})) {
        throw CompatError(std::string("model directory lacks ") + to_string(v) + "/" + to_string(t));
      }
    }
  }
  return m;
}

}  // namespace baitpress
