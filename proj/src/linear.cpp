#include "baitpress/linear.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "baitpress/error.hpp"
#include "baitpress/eval.hpp"
#include "baitpress/folds.hpp"
#include "baitpress/io.hpp"

namespace baitpress {

namespace {

constexpr char kModelMagic[4] = {'B', 'P', 'L', 'M'};
constexpr std::uint32_t kModelVersion = 1;
constexpr std::uint8_t kNoView = 0xFF;

// w~ . x~ where x~ = [x, 1] and w~ = [w, b].
double augmented_dot(const SparseMatrix::Row& row, const std::vector<double>& w) {
  return row.dot(w) + w.back();
}

void augmented_axpy(double a, const SparseMatrix::Row& row, std::vector<double>& w) {
  for (std::size_t k = 0; k < row.indices.size(); ++k) w[row.indices[k]] += a * row.values[k];
  w.back() += a;
}

std::vector<double> diag_q(const SparseMatrix& x) {
  std::vector<double> qd(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) qd[i] = x.row(i).squared_norm() + 1.0;
  return qd;
}

double squared_norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

std::vector<double> augmented_weights(const FitResult& fit) {
  std::vector<double> w = fit.model.weights;
  w.push_back(fit.model.bias - fit.target_offset);
  return w;
}

void check_config(const SolverConfig& cfg, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("C must be positive");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (cfg.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

}  // namespace

const char* to_string(ModelTarget t) noexcept {
  switch (t) {
    case ModelTarget::mean: return "mean";
    case ModelTarget::std: return "std";
    case ModelTarget::label: return "class";
  }
  return "?";
}

FitResult fit_svr(const SparseMatrix& x, std::span<const double> y, double c, double epsilon,
                  const SolverConfig& cfg) {
  check_config(cfg, c);
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  const std::size_t n = x.n_rows();
  if (y.size() != n) {
    throw std::invalid_argument("target length " + std::to_string(y.size()) + " != rows " + std::to_string(n));
  }
  if (std::any_of(y.begin(), y.end(), [](double v) { return !std::isfinite(v); })) {
    throw std::invalid_argument("non-finite regression target");
  }

  FitResult fit;
  fit.target_offset = n == 0 ? 0.0 : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  std::vector<double> yc(y.begin(), y.end());
  for (double& v : yc) v -= fit.target_offset;

  std::vector<double> w(x.n_cols() + 1, 0.0);
  std::vector<double>& beta = fit.dual;
  beta.assign(n, 0.0);
  const auto qd = diag_q(x);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  while (n > 0 && fit.iterations < cfg.max_iterations) {
    std::shuffle(order.begin(), order.end(), rng);
    double max_violation = 0.0;
    for (std::size_t i : order) {
      const auto row = x.row(i);
      const double g = augmented_dot(row, w) - yc[i];
      const double gp = g + epsilon;
      const double gn = g - epsilon;
      const double h = qd[i];
      double& b = beta[i];

      double violation;
      if (b == 0.0) {
        violation = gp < 0.0 ? -gp : (gn > 0.0 ? gn : 0.0);
      } else if (b >= c) {
        violation = gp > 0.0 ? gp : 0.0;
      } else if (b <= -c) {
        violation = gn < 0.0 ? -gn : 0.0;
      } else {
        violation = b > 0.0 ? std::abs(gp) : std::abs(gn);
      }
      max_violation = std::max(max_violation, violation);

      // Minimizer of the one-dimensional piecewise quadratic, then clipped.
      double d;
      if (gp < h * b) {
        d = -gp / h;
      } else if (gn > h * b) {
        d = -gn / h;
      } else {
        d = -b;
      }
      if (std::abs(d) < 1e-12) continue;
      const double old = b;
      b = std::clamp(b + d, -c, c);
      if (b != old) augmented_axpy(b - old, row, w);
    }
    ++fit.iterations;
    fit.max_violation = max_violation;
    if (max_violation < cfg.tolerance) {
      fit.converged = true;
      break;
    }
  }
  if (n == 0) fit.converged = true;

  fit.model.bias = w.back() + fit.target_offset;
  w.pop_back();
  fit.model.weights = std::move(w);
  fit.model.c = c;
  fit.model.epsilon = epsilon;
  fit.model.task = Task::regression;
  return fit;
}

LinearModel train_svr(const SparseMatrix& x, std::span<const double> y, double c, double epsilon,
                      const SolverConfig& cfg) {
  return fit_svr(x, y, c, epsilon, cfg).model;
}

FitResult fit_svc(const SparseMatrix& x, std::span<const int> y, double c, const SolverConfig& cfg) {
  check_config(cfg, c);
  const std::size_t n = x.n_rows();
  if (y.size() != n) throw std::invalid_argument("label length != rows");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw std::invalid_argument("labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("classification needs both classes");

  FitResult fit;
  const double diag = 0.5 / c;  // squared hinge adds 1/(2C) to the Hessian diagonal
  std::vector<double> w(x.n_cols() + 1, 0.0);
  std::vector<double>& alpha = fit.dual;
  alpha.assign(n, 0.0);
  auto qd = diag_q(x);
  for (double& q : qd) q += diag;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  while (fit.iterations < cfg.max_iterations) {
    std::shuffle(order.begin(), order.end(), rng);
    double max_violation = 0.0;
    for (std::size_t i : order) {
      const auto row = x.row(i);
      const double yi = static_cast<double>(y[i]);
      double& a = alpha[i];
      const double g = yi * augmented_dot(row, w) - 1.0 + a * diag;
      const double pg = a == 0.0 ? std::min(g, 0.0) : g;
      max_violation = std::max(max_violation, std::abs(pg));
      if (pg == 0.0) continue;
      const double old = a;
      a = std::max(a - g / qd[i], 0.0);
      if (a != old) augmented_axpy((a - old) * yi, row, w);
    }
    ++fit.iterations;
    fit.max_violation = max_violation;
    if (max_violation < cfg.tolerance) {
      fit.converged = true;
      break;
    }
  }

  fit.model.bias = w.back();
  w.pop_back();
  fit.model.weights = std::move(w);
  fit.model.c = c;
  fit.model.epsilon = 0.0;
  fit.model.task = Task::classification;
  fit.model.target = ModelTarget::label;
  return fit;
}

LinearModel train_svc(const SparseMatrix& x, std::span<const int> y, double c, const SolverConfig& cfg) {
  return fit_svc(x, y, c, cfg).model;
}

std::vector<double> predict(const LinearModel& model, const SparseMatrix& x) {
  if (x.n_cols() != model.weights.size()) {
    throw std::invalid_argument("matrix has " + std::to_string(x.n_cols()) + " columns, model expects " +
                                std::to_string(model.weights.size()));
  }
  std::vector<double> out(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) out[i] = x.row(i).dot(model.weights) + model.bias;
  return out;
}

double svr_primal_objective(const FitResult& fit, const SparseMatrix& x, std::span<const double> y) {
  const auto w = augmented_weights(fit);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const double r = augmented_dot(x.row(i), w) - (y[i] - fit.target_offset);
    loss += std::max(0.0, std::abs(r) - fit.model.epsilon);
  }
  return 0.5 * squared_norm(w) + fit.model.c * loss;
}

double svr_dual_objective(const FitResult& fit, std::span<const double> y) {
  const auto w = augmented_weights(fit);
  double linear = 0.0;
  for (std::size_t i = 0; i < fit.dual.size(); ++i) {
    linear += (y[i] - fit.target_offset) * fit.dual[i] - fit.model.epsilon * std::abs(fit.dual[i]);
  }
  return linear - 0.5 * squared_norm(w);
}

double svc_primal_objective(const FitResult& fit, const SparseMatrix& x, std::span<const int> y) {
  const auto w = augmented_weights(fit);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const double m = std::max(0.0, 1.0 - static_cast<double>(y[i]) * augmented_dot(x.row(i), w));
    loss += m * m;
  }
  return 0.5 * squared_norm(w) + fit.model.c * loss;
}

double svc_dual_objective(const FitResult& fit) {
  const auto w = augmented_weights(fit);
  double s = 0.0;
  for (double a : fit.dual) s += a - a * a / (4.0 * fit.model.c);
  return s - 0.5 * squared_norm(w);
}

std::vector<std::pair<std::string, double>> top_weights(const LinearModel& model, const Vocabulary& vocab,
                                                        std::size_t k, WeightSign sign) {
  if (vocab.n_features() != model.n_features()) throw std::invalid_argument("vocabulary does not match model");
  std::vector<std::size_t> idx(model.n_features());
  std::iota(idx.begin(), idx.end(), 0);
  const auto better = [&](std::size_t a, std::size_t b) {
    const double wa = model.weights[a], wb = model.weights[b];
    if (wa != wb) return sign == WeightSign::positive ? wa > wb : wa < wb;
    return vocab.term(a) < vocab.term(b);
  };
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(vocab.term(idx[i]), model.weights[idx[i]]);
  return out;
}

std::vector<double> default_c_grid() { return {0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0}; }

TuneResult tune_c(const SparseMatrix& x, std::span<const double> y, std::span<const double> grid,
                  std::size_t folds, const SolverConfig& cfg) {
  if (grid.empty()) throw std::invalid_argument("empty C grid");
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (x.n_rows() < folds) throw std::invalid_argument("fewer rows than folds");
  if (y.size() != x.n_rows()) throw std::invalid_argument("target length != rows");

  const FoldPlan plan = make_folds(x.n_rows(), folds, cfg.seed);
  std::vector<SparseMatrix> train_x, test_x;
  std::vector<std::vector<double>> train_y, test_y;
  for (std::size_t f = 0; f < folds; ++f) {
    const auto tr = plan.rows_outside(f), te = plan.rows_in(f);
    train_x.push_back(x.select_rows(tr));
    test_x.push_back(x.select_rows(te));
    std::vector<double> ytr, yte;
    for (std::size_t i : tr) ytr.push_back(y[i]);
    for (std::size_t i : te) yte.push_back(y[i]);
    train_y.push_back(std::move(ytr));
    test_y.push_back(std::move(yte));
  }

  TuneResult result;
  double best = std::numeric_limits<double>::infinity();
  for (double c : grid) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
      SolverConfig fold_cfg = cfg;
      fold_cfg.seed = derive_seed(cfg.seed, f);
      const auto model = train_svr(train_x[f], train_y[f], c, 0.0, fold_cfg);
      total += mse(predict(model, test_x[f]), test_y[f]);
    }
    const double score = total / static_cast<double>(folds);
    result.table.emplace_back(c, score);
    if (score < best || (score == best && c < result.best_c)) {
      best = score;
      result.best_c = c;
    }
  }
  return result;
}

void LinearModel::save(std::ostream& out) const {
  out.write(kModelMagic, 4);
  io::write_le<std::uint32_t>(out, kModelVersion);
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(task));
  io::write_le<std::uint8_t>(out, view ? static_cast<std::uint8_t>(*view) : kNoView);
  io::write_le<std::uint8_t>(out, static_cast<std::uint8_t>(target));
  io::write_le<std::uint8_t>(out, 0);
  io::write_le<double>(out, c);
  io::write_le<double>(out, epsilon);
  io::write_le<std::uint64_t>(out, weights.size());
  io::write_le<double>(out, bias);
  for (double v : weights) io::write_le<double>(out, v);
}

LinearModel LinearModel::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kModelMagic)) throw CompatError("not a linear model file");
  if (const auto version = io::read_le<std::uint32_t>(in); version != kModelVersion) {
    throw CompatError("unsupported linear model version " + std::to_string(version));
  }
  LinearModel m;
  const auto task = io::read_le<std::uint8_t>(in);
  const auto view = io::read_le<std::uint8_t>(in);
  const auto target = io::read_le<std::uint8_t>(in);
  io::read_le<std::uint8_t>(in);
  if (task > 1 || target > 2 || (view != kNoView && view >= kAllViews.size())) throw CompatError("corrupt model header");
  m.task = static_cast<Task>(task);
  if (view != kNoView) m.view = static_cast<FieldView>(view);
  m.target = static_cast<ModelTarget>(target);
  m.c = io::read_le<double>(in);
  m.epsilon = io::read_le<double>(in);
  const auto n = io::read_le<std::uint64_t>(in);
  m.bias = io::read_le<double>(in);
  m.weights.resize(n);
  for (auto& v : m.weights) v = io::read_le<double>(in);
  return m;
}

}  // namespace baitpress
