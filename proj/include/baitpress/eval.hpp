#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace baitpress {

struct RegressionReport {
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
  double wall_time_seconds = 0.0;
};

struct ClassificationReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Mean squared error. Throws std::invalid_argument on empty or unequal input.
double mse(std::span<const double> pred, std::span<const double> truth);

RegressionReport regression_report(std::span<const double> pred, std::span<const double> truth,
                                   double wall_time_seconds = 0.0);

/// Mann-Whitney AUC: the probability that a random positive scores above a
/// random negative, ties counting one half. Labels are +1 / -1.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Counts at score > threshold, plus AUC.
ClassificationReport classification_report(std::span<const double> scores, std::span<const int> labels,
                                           double threshold = 0.0);

/// One row of an experiment table (per view, per ensemble variant, ...).
struct ResultRow {
  std::string name;
  double mse = 0.0;
  double rmse = 0.0;
  double time_seconds = 0.0;
  std::optional<double> best_c;
};

/// Aligned plain-text table; a header line is always printed.
void write_table_text(std::ostream& out, const std::vector<ResultRow>& rows);
/// One JSON object per row.
void write_table_jsonl(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace baitpress
