#include "baitpress/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace baitpress {

double mse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("prediction and truth lengths differ");
  if (pred.empty()) throw std::invalid_argument("mse of an empty vector");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

RegressionReport regression_report(std::span<const double> pred, std::span<const double> truth,
                                   double wall_time_seconds) {
  RegressionReport r;
  r.mse = mse(pred, truth);
  r.rmse = std::sqrt(r.mse);
  r.n = pred.size();
  r.wall_time_seconds = wall_time_seconds;
  return r;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("score and label lengths differ");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks (1-based) over tied groups.
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      const int y = labels[order[k]];
      if (y != 1 && y != -1) throw std::invalid_argument("labels must be +1 or -1");
      if (y == 1) {
        positive_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("AUC needs both classes");
  const double np = static_cast<double>(n_pos);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

ClassificationReport classification_report(std::span<const double> scores, std::span<const int> labels,
                                           double threshold) {
  ClassificationReport r;
  r.auc = roc_auc(scores, labels);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++r.tp;
    else if (predicted) ++r.fp;
    else if (actual) ++r.fn;
    else ++r.tn;
  }
  const auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  r.accuracy = ratio(r.tp + r.tn, scores.size());
  r.precision = ratio(r.tp, r.tp + r.fp);
  r.recall = ratio(r.tp, r.tp + r.fn);
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

void write_table_text(std::ostream& out, const std::vector<ResultRow>& rows) {
  std::size_t width = std::string("Feature").size();
  for (const auto& r : rows) width = std::max(width, r.name.size());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %10s  %10s  %9s  %8s\n", static_cast<int>(width), "Feature", "MSE", "RMSE",
                "Time, s", "Best C");
  out << buf;
  for (const auto& r : rows) {
    char c[32] = "-";
    if (r.best_c) std::snprintf(c, sizeof c, "%g", *r.best_c);
    std::snprintf(buf, sizeof buf, "%-*s  %10.5f  %10.5f  %9.2f  %8s\n", static_cast<int>(width), r.name.c_str(),
                  r.mse, r.rmse, r.time_seconds, c);
    out << buf;
  }
}

void write_table_jsonl(std::ostream& out, const std::vector<ResultRow>& rows) {
  for (const auto& r : rows) {
    nlohmann::json obj = {{"name", r.name}, {"mse", r.mse}, {"rmse", r.rmse}, {"timeSeconds", r.time_seconds}};
    obj["bestC"] = r.best_c ? nlohmann::json(*r.best_c) : nlohmann::json(nullptr);
    out << obj.dump() << '\n';
  }
}

}  // namespace baitpress
