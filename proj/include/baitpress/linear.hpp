#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "baitpress/features.hpp"
#include "baitpress/text.hpp"

namespace baitpress {

enum class Task : std::uint8_t { regression, classification };
enum class ModelTarget : std::uint8_t { mean, std, label };

const char* to_string(ModelTarget t) noexcept;

/// A trained L2-regularized linear model: score = weights . x + bias.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c = 1.0;
  double epsilon = 0.0;  // regression only
  Task task = Task::regression;
  std::optional<FieldView> view;
  ModelTarget target = ModelTarget::mean;

  std::size_t n_features() const noexcept { return weights.size(); }
  bool operator==(const LinearModel&) const = default;

  /// Binary layout, little-endian: "BPLM", u32 version, u8 task, u8 view
  /// (0xFF = none), u8 target, u8 reserved, f64 c, f64 epsilon,
  /// u64 n_features, f64 bias, then n_features f64 weights.
  void save(std::ostream& out) const;
  static LinearModel load(std::istream& in);
};

struct SolverConfig {
  double tolerance = 1e-4;         // stop when the largest projected-gradient violation in a pass is below this
  std::size_t max_iterations = 1000;  // outer passes over the data
  std::uint64_t seed = 1;          // coordinate order
};

/// Model plus the solver's final state, for diagnostics and tests.
struct FitResult {
  LinearModel model;
  /// Dual variables, one per row. Regression: beta in [-C, C] with
  /// w = sum beta_i x_i. Classification: alpha >= 0 with w = sum alpha_i y_i x_i.
  std::vector<double> dual;
  /// Constant subtracted from the regression targets before solving (their
  /// mean); the returned bias already includes it. Zero for classification.
  double target_offset = 0.0;
  std::size_t iterations = 0;
  double max_violation = 0.0;
  bool converged = false;
};

/// Epsilon-insensitive (L1) support vector regression by dual coordinate
/// descent. The bias is learned as the weight of a constant-1 feature after
/// centering the targets on their mean.
FitResult fit_svr(const SparseMatrix& x, std::span<const double> y, double c, double epsilon,
                  const SolverConfig& cfg = {});
LinearModel train_svr(const SparseMatrix& x, std::span<const double> y, double c, double epsilon,
                      const SolverConfig& cfg = {});

/// Squared-hinge support vector classification by dual coordinate descent.
/// Labels must be +1 / -1 with both present.
FitResult fit_svc(const SparseMatrix& x, std::span<const int> y, double c, const SolverConfig& cfg = {});
LinearModel train_svc(const SparseMatrix& x, std::span<const int> y, double c, const SolverConfig& cfg = {});

std::vector<double> predict(const LinearModel& model, const SparseMatrix& x);

/// Objectives of the problem `fit_svr` solves (on centered targets, bias
/// regularized). The duality gap is primal - dual >= 0.
double svr_primal_objective(const FitResult& fit, const SparseMatrix& x, std::span<const double> y);
double svr_dual_objective(const FitResult& fit, std::span<const double> y);
double svc_primal_objective(const FitResult& fit, const SparseMatrix& x, std::span<const int> y);
double svc_dual_objective(const FitResult& fit);

enum class WeightSign { positive, negative };

/// The k largest (positive) or smallest (negative) weights with their
/// n-grams; ties broken by n-gram. k larger than the vocabulary returns all.
std::vector<std::pair<std::string, double>> top_weights(const LinearModel& model, const Vocabulary& vocab,
                                                        std::size_t k, WeightSign sign);

/// C values covering every best C reported for the per-field models.
std::vector<double> default_c_grid();

struct TuneResult {
  double best_c = 0.0;
  std::vector<std::pair<double, double>> table;  // (C, mean out-of-fold MSE) in grid order
};

/// k-fold cross-validated choice of C for SVR (epsilon = 0). Ties go to the
/// smaller C. Folds are drawn from cfg.seed.
TuneResult tune_c(const SparseMatrix& x, std::span<const double> y, std::span<const double> grid,
                  std::size_t folds, const SolverConfig& cfg = {});

}  // namespace baitpress
