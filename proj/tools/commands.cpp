#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <array>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>
#include <json.hpp>

#include "baitpress/error.hpp"
#include "baitpress/eval.hpp"
#include "baitpress/io.hpp"
#include "baitpress/parallel.hpp"

namespace baitpress::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::string& require(const std::optional<std::string>& value, const char* flag) {
  if (!value) throw InputError(std::string("missing required flag ") + flag);
  return *value;
}

const std::string& require_file(const std::optional<std::string>& value, const char* flag) {
  const auto& path = require(value, flag);
  if (!fs::is_regular_file(path)) throw InputError(std::string(flag) + ": no such file " + path);
  return path;
}

std::optional<BaseKey> parse_key(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::nullopt;
  const auto view = parse_view(text.substr(0, slash));
  const auto target = text.substr(slash + 1);
  if (!view || (target != "mean" && target != "std")) return std::nullopt;
  return BaseKey{*view, target == "mean" ? Target::mean : Target::std};
}

std::string key_name(const BaseKey& k) { return std::string(to_string(k.first)) + "/" + to_string(k.second); }

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double c = std::stod(item, &used);
      if (used != item.size() || !(c > 0.0)) throw std::invalid_argument(item);
      grid.push_back(c);
    } catch (const std::exception&) {
      throw InputError("bad --grid entry '" + item + "'");
    }
  }
  if (grid.empty()) throw InputError("--grid is empty");
  return grid;
}

std::vector<ExternalExample> load_external(const RunConfig& cfg) {
  if (cfg.stack.features != FeatureSet::mean_std_external) return {};
  std::ifstream in(require_file(cfg.external, "--external"));
  return parse_external(in);
}

std::string format_score(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << std::fixed << v;
  return s.str();
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw InputError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  try {
    auto& s = cfg.stack;
    if (j.contains("features")) {
      const auto f = parse_feature_set(j["features"].get<std::string>());
      if (!f) throw InputError("config: unknown feature set");
      s.features = *f;
    }
    if (j.contains("folds")) s.n_folds = j["folds"].get<std::size_t>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("jobs")) s.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("minDf")) s.min_df = j["minDf"].get<std::size_t>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<std::vector<double>>();
    if (j.contains("nTrees")) s.trees.n_trees = j["nTrees"].get<std::size_t>();
    if (j.contains("minSamplesSplit")) s.trees.min_samples_split = j["minSamplesSplit"].get<std::size_t>();
    if (j.contains("tolerance")) s.solver.tolerance = j["tolerance"].get<double>();
    if (j.contains("maxIterations")) s.solver.max_iterations = j["maxIterations"].get<std::size_t>();
    if (j.contains("externalC")) s.external_c = j["externalC"].get<double>();
    if (j.contains("c")) {
      for (const auto& [name, value] : j["c"].items()) {
        const auto key = parse_key(name);
        if (!key) throw InputError("config: bad C key '" + name + "' (expected e.g. postText/mean)");
        s.c_overrides[*key] = value.get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw InputError("config file " + path + ": " + e.what());
  }
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const auto& instances = require_file(cfg.instances, "--instances");
  const auto& truth = require_file(cfg.truth, "--truth");
  const auto& model_dir = require(cfg.out, "--out");
  const auto stopwords = Stopwords::from_environment();
  const auto external = load_external(cfg);
  const Dataset ds = load_dataset(instances, truth);

  const auto start = std::chrono::steady_clock::now();
  const auto result = train_stacked(ds, cfg.stack, stopwords, external);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.model.save(model_dir);

  const auto stats = dataset_stats(ds);
  out << "posts: " << stats.n_posts << " (clickbait " << stats.n_clickbait.value_or(0) << ", no-clickbait "
      << stats.n_no_clickbait.value_or(0) << ")\n";
  std::vector<ResultRow> rows;
  for (const auto& b : result.report.base) {
    rows.push_back({std::string(to_string(b.view)) + " " + to_string(b.target), b.oof.mse, b.oof.rmse,
                    b.oof.wall_time_seconds, b.c});
  }
  rows.push_back({std::string("ensemble (") + to_string(cfg.stack.features) + ")", result.report.ensemble.mse,
                  result.report.ensemble.rmse, result.report.ensemble.wall_time_seconds, std::nullopt});
  write_table_text(out, rows);
  out << "meta-feature importance:\n";
  auto importances = result.report.importances;
  std::stable_sort(importances.begin(), importances.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [name, value] : importances) out << "  " << std::left << std::setw(28) << name << format_score(value) << '\n';
  if (result.report.external_auc) out << "external classifier hold-out AUC: " << format_score(*result.report.external_auc) << '\n';
  out << "model written to " << model_dir << " in " << std::fixed << std::setprecision(1) << elapsed << " s\n";
  out.unsetf(std::ios::fixed);

  if (cfg.report) {
    std::ostringstream jl;
    write_table_jsonl(jl, rows);
    io::write_file_atomic(*cfg.report, jl.str());
  }
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
  const auto& model_dir = require(cfg.model, "--model");
  const auto& instances = require_file(cfg.instances, "--instances");
  const auto& results = require(cfg.out, "--out");
  const auto stopwords = Stopwords::from_environment();
  const auto model = StackedModel::load(model_dir);

  std::ifstream in(instances);
  const auto posts = parse_instances(in);
  const auto scored = score_posts(model, posts, stopwords, cfg.stack.jobs);
  std::string body;
  for (const auto& s : scored) {
    nlohmann::ordered_json line = {{"id", s.id}, {"clickbaitScore", s.score}};
    body += line.dump();
    body += '\n';
  }
  io::write_file_atomic(results, body);
  out << "scored " << scored.size() << " posts -> " << results << '\n';
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  const auto& results_path = require_file(cfg.results, "--results");
  const auto& truth_path = require_file(cfg.truth, "--truth");
  std::ifstream tin(truth_path);
  const auto labels = parse_truth(tin);

  std::vector<std::pair<std::string, double>> predictions;
  {
    std::ifstream rin(results_path);
    std::string line;
    std::size_t lineno = 0;
    std::unordered_set<std::string> seen;
    while (std::getline(rin, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.contains("id") || !obj.contains("clickbaitScore") || !obj["clickbaitScore"].is_number()) {
        throw ParseError(lineno, "expected {\"id\", \"clickbaitScore\"}");
      }
      const auto id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
      if (!seen.insert(id).second) throw MismatchError("duplicate result id " + id);
      if (!labels.contains(id)) throw MismatchError("result id " + id + " has no truth label");
      predictions.emplace_back(id, obj["clickbaitScore"].get<double>());
    }
    if (seen.size() != labels.size()) {
      std::vector<std::string> missing;
      for (const auto& [id, _] : labels) {
        if (!seen.contains(id)) missing.push_back(id);
      }
      std::sort(missing.begin(), missing.end());
      throw MismatchError("truth id " + missing.front() + " has no result");
    }
  }
  if (predictions.empty()) throw InputError("no predictions to evaluate");

  std::vector<double> pred, truth;
  std::array<std::vector<double>, 2> class_pred, class_truth;
  for (const auto& [id, score] : predictions) {
    const auto& label = labels.at(id);
    pred.push_back(score);
    truth.push_back(label.mean);
    const auto c = static_cast<std::size_t>(label.label);
    class_pred[c].push_back(score);
    class_truth[c].push_back(label.mean);
  }
  const auto report = regression_report(pred, truth);
  json j = {{"n", report.n}, {"mse", report.mse}, {"rmse", report.rmse}};
  out << "n:    " << report.n << "\nMSE:  " << format_score(report.mse) << "\nRMSE: " << format_score(report.rmse) << '\n';
  for (std::size_t c = 0; c < 2; ++c) {
    const char* name = c == static_cast<std::size_t>(PostClass::clickbait) ? "clickbait" : "no-clickbait";
    if (class_pred[c].empty()) continue;
    const auto r = regression_report(class_pred[c], class_truth[c]);
    out << "  " << name << ": n=" << r.n << " MSE=" << format_score(r.mse) << '\n';
    j["perClass"][name] = {{"n", r.n}, {"mse", r.mse}, {"rmse", r.rmse}};
  }
  if (cfg.out) io::write_file_atomic(*cfg.out, j.dump() + "\n");
  return kExitOk;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out) {
  const auto& instances = require_file(cfg.instances, "--instances");
  const auto& truth = require_file(cfg.truth, "--truth");
  const auto stopwords = Stopwords::from_environment();
  const Dataset ds = load_dataset(instances, truth);
  const auto tokens = preprocess_posts(ds.posts, stopwords, cfg.stack.jobs);
  const std::array<std::vector<double>, 2> y = {targets(ds, Target::mean), targets(ds, Target::std)};

  std::vector<BaseKey> keys;
  for (Target t : {Target::mean, Target::std}) {
    for (FieldView v : kAllViews) keys.emplace_back(v, t);
  }
  std::vector<ResultRow> rows(keys.size());
  parallel_for(keys.size(), cfg.stack.jobs, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const auto& docs = tokens[static_cast<std::size_t>(keys[k].first)];
    const auto vocab = fit_vocabulary(docs, cfg.stack.min_df.value_or(default_min_df(docs.size())));
    const auto x = transform_matrix(vocab, docs);
    SolverConfig solver = cfg.stack.solver;
    solver.seed = derive_seed(cfg.stack.seed, k);
    const auto tuned = tune_c(x, y[static_cast<std::size_t>(keys[k].second)], cfg.grid, cfg.stack.n_folds, solver);
    const double best_mse =
        std::find_if(tuned.table.begin(), tuned.table.end(), [&](const auto& e) { return e.first == tuned.best_c; })->second;
    rows[k] = {key_name(keys[k]), best_mse, std::sqrt(best_mse),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), tuned.best_c};
  });
  write_table_text(out, rows);
  if (cfg.out) {
    std::ostringstream jl;
    write_table_jsonl(jl, rows);
    io::write_file_atomic(*cfg.out, jl.str());
  }
  return kExitOk;
}

int cmd_inspect(const RunConfig& cfg, std::ostream& out) {
  const auto model = StackedModel::load(require(cfg.model, "--model"));
  if (cfg.top_k > 0) {
    for (const auto& [key, lm] : model.base_models) {
      const auto& vocab = model.vocabularies[static_cast<std::size_t>(key.first)];
      for (WeightSign sign : {WeightSign::positive, WeightSign::negative}) {
        out << key_name(key) << (sign == WeightSign::positive ? " top positive:\n" : " top negative:\n");
        for (const auto& [gram, w] : top_weights(lm, vocab, cfg.top_k, sign)) {
          out << "  " << std::left << std::setw(32) << gram << format_score(w) << '\n';
        }
      }
    }
  }
  out << "meta-feature importance (share of splits):\n";
  const auto imp = feature_importance(model.meta);
  std::vector<std::size_t> order(imp.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
  for (std::size_t c : order) out << "  " << std::left << std::setw(28) << model.columns[c] << format_score(imp[c]) << '\n';
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"baitpress: clickbait scoring with stacked linear models"};
  app.require_subcommand(1);

  std::optional<std::string> instances, truth, model, output, results, external, report, config_file, grid, features;
  std::optional<std::size_t> folds, jobs, min_df, n_trees, min_split, top_k;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> c_flags;

  auto* train = app.add_subcommand("train", "train a stacked model");
  auto* predict_cmd = app.add_subcommand("predict", "score posts with a trained model");
  auto* evaluate = app.add_subcommand("evaluate", "MSE of a results file against truth");
  auto* tune = app.add_subcommand("tune", "cross-validate C per field and target");
  auto* inspect = app.add_subcommand("inspect", "top n-gram weights and meta-feature importances");

  for (auto* sub : {train, predict_cmd, evaluate, tune, inspect}) {
    sub->add_option("--config", config_file, "JSON config file (flags take precedence)");
    sub->add_option("--jobs", jobs, "worker threads");
  }
  for (auto* sub : {train, predict_cmd, tune}) sub->add_option("--instances", instances, "instances .jsonl");
  for (auto* sub : {train, evaluate, tune}) sub->add_option("--truth", truth, "truth .jsonl");
  for (auto* sub : {predict_cmd, inspect}) sub->add_option("--model", model, "model directory");
  for (auto* sub : {train, predict_cmd, evaluate, tune}) sub->add_option("--out", output, "output path");
  for (auto* sub : {train, tune}) {
    sub->add_option("--folds", folds, "cross-validation folds");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--min-df", min_df, "minimum document frequency of an n-gram");
  }
  train->add_option("--features", features, "mean | mean+std | mean+std+external");
  train->add_option("--external", external, "labeled external corpus .jsonl");
  train->add_option("--report", report, "write the training table as JSON lines");
  train->add_option("--trees", n_trees, "extra-trees ensemble size");
  train->add_option("--min-samples-split", min_split, "extra-trees minimum node size to split");
  train->add_option("--c", c_flags, "C override, e.g. postText/mean=0.1");
  tune->add_option("--grid", grid, "comma-separated C values");
  evaluate->add_option("--results", results, "results .jsonl from predict");
  inspect->add_option("--k", top_k, "n-grams per list");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    RunConfig cfg;
    if (config_file) apply_config_file(cfg, *config_file);
    cfg.instances = instances;
    cfg.truth = truth;
    cfg.model = model;
    cfg.out = output;
    cfg.results = results;
    cfg.external = external;
    cfg.report = report;
    if (features) {
      const auto f = parse_feature_set(*features);
      if (!f) throw InputError("--features must be mean, mean+std or mean+std+external");
      cfg.stack.features = *f;
    }
    if (folds) cfg.stack.n_folds = *folds;
    if (seed) cfg.stack.seed = *seed;
    if (jobs) cfg.stack.jobs = std::max<std::size_t>(1, *jobs);
    if (min_df) cfg.stack.min_df = *min_df;
    if (n_trees) cfg.stack.trees.n_trees = *n_trees;
    if (min_split) cfg.stack.trees.min_samples_split = *min_split;
    if (top_k) cfg.top_k = *top_k;
    if (grid) cfg.grid = parse_grid(*grid);
    for (const auto& flag : c_flags) {
      const auto eq = flag.find('=');
      const auto key = eq == std::string::npos ? std::nullopt : parse_key(flag.substr(0, eq));
      if (!key) throw InputError("bad --c '" + flag + "' (expected e.g. postText/mean=0.1)");
      cfg.stack.c_overrides[*key] = parse_grid(flag.substr(eq + 1)).front();
    }
    if (cfg.stack.n_folds < 2) throw InputError("--folds must be at least 2");
    if (cfg.stack.min_df && *cfg.stack.min_df < 1) throw InputError("--min-df must be at least 1");

    if (train->parsed()) return cmd_train(cfg, out);
    if (predict_cmd->parsed()) return cmd_predict(cfg, out);
    if (evaluate->parsed()) return cmd_evaluate(cfg, out);
    if (tune->parsed()) return cmd_tune(cfg, out);
    return cmd_inspect(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CompatError& e) {
    err << "error: incompatible model: " << e.what() << '\n';
    return kExitCompat;
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace baitpress::cli
