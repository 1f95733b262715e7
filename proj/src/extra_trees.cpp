#include "baitpress/extra_trees.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "baitpress/error.hpp"
#include "baitpress/folds.hpp"
#include "baitpress/io.hpp"
#include "baitpress/parallel.hpp"

namespace baitpress {

namespace {

constexpr char kTreeMagic[4] = {'B', 'P', 'E', 'T'};
constexpr std::uint32_t kTreeVersion = 1;

class TreeBuilder {
 public:
  TreeBuilder(const MetaFeatures& x, std::span<const double> y, std::size_t min_samples_split, std::uint64_t seed)
      : x_(x), y_(y), min_split_(min_samples_split), rng_(seed), rows_(x.n_rows()) {
    std::iota(rows_.begin(), rows_.end(), 0);
  }

  Tree build() {
    grow(0, rows_.size());
    return std::move(tree_);
  }

 private:
  // Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::uint32_t grow(std::size_t begin, std::size_t end) {
    const auto id = static_cast<std::uint32_t>(tree_.size());
    tree_.emplace_back();
    const std::size_t n = end - begin;

    double sum = 0.0;
    bool constant_target = true;
    for (std::size_t k = begin; k < end; ++k) {
      sum += y_[rows_[k]];
      constant_target = constant_target && y_[rows_[k]] == y_[rows_[begin]];
    }
    // Mean anchored at the first target, so a constant node reproduces it exactly.
    const double y0 = y_[rows_[begin]];
    double offset = 0.0;
    for (std::size_t k = begin; k < end; ++k) offset += y_[rows_[k]] - y0;
    tree_[id].value = y0 + offset / static_cast<double>(n);
    tree_[id].n_samples = static_cast<std::uint32_t>(n);
    if (n < min_split_ || constant_target) return id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = -1.0;
    for (std::size_t f = 0; f < x_.n_cols(); ++f) {
      double lo = x_.at(rows_[begin], f), hi = lo;
      for (std::size_t k = begin + 1; k < end; ++k) {
        const double v = x_.at(rows_[k], f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(hi > lo)) continue;
      double t = lo + uniform() * (hi - lo);
      if (!(t > lo && t < hi)) t = lo + 0.5 * (hi - lo);
      if (!(t > lo && t < hi)) t = std::nextafter(lo, hi);

      // Maximizing sum_L^2/n_L + sum_R^2/n_R maximizes the variance reduction.
      double sum_left = 0.0;
      std::size_t n_left = 0;
      for (std::size_t k = begin; k < end; ++k) {
        if (x_.at(rows_[k], f) <= t) {
          sum_left += y_[rows_[k]];
          ++n_left;
        }
      }
      const double sum_right = sum - sum_left;
      const auto n_right = static_cast<double>(n - n_left);
      const double score = sum_left * sum_left / static_cast<double>(n_left) + sum_right * sum_right / n_right;
      if (score > best_score) {
        best_score = score;
        best_feature = static_cast<int>(f);
        best_threshold = t;
      }
    }
    if (best_feature < 0) return id;  // every feature constant here

    const auto f = static_cast<std::size_t>(best_feature);
    const auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                           rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                           [&](std::size_t r) { return x_.at(r, f) <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - rows_.begin());

    tree_[id].feature = best_feature;
    tree_[id].threshold = best_threshold;
    const auto left = grow(begin, split);
    const auto right = grow(split, end);
    tree_[id].left = left;
    tree_[id].right = right;
    return id;
  }

  const MetaFeatures& x_;
  std::span<const double> y_;
  std::size_t min_split_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> rows_;
  Tree tree_;
};

}  // namespace

MetaFeatures MetaFeatures::select_rows(std::span<const std::size_t> rows) const {
  MetaFeatures out(columns, rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(row(rows[i]).begin(), n_cols(), out.values.begin() + static_cast<std::ptrdiff_t>(i * n_cols()));
  }
  return out;
}

ExtraTreesModel train_extratrees(const MetaFeatures& x, std::span<const double> y, const ExtraTreesParams& params,
                                 std::size_t jobs) {
  if (x.n_rows() == 0 || x.n_cols() == 0) throw std::invalid_argument("extra-trees needs a non-empty training set");
  if (y.size() != x.n_rows()) throw std::invalid_argument("target length != rows");
  if (params.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");

  ExtraTreesModel model;
  model.n_features = x.n_cols();
  model.params = params;
  model.trees.resize(params.n_trees);
  parallel_for(params.n_trees, jobs, [&](std::size_t t) {
    model.trees[t] = TreeBuilder(x, y, params.min_samples_split, derive_seed(params.seed, t)).build();
  });
  return model;
}

double predict_tree(const Tree& tree, std::span<const double> row) {
  std::size_t node = 0;
  while (!tree[node].is_leaf()) {
    const auto& n = tree[node];
    node = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return tree[node].value;
}

std::vector<double> predict_extratrees(const ExtraTreesModel& model, const MetaFeatures& x) {
  if (x.n_cols() != model.n_features) {
    throw std::invalid_argument("meta-feature matrix has " + std::to_string(x.n_cols()) + " columns, model expects " +
                                std::to_string(model.n_features));
  }
  std::vector<double> out(x.n_rows(), 0.0);
  if (model.trees.empty()) return out;
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const double first = predict_tree(model.trees.front(), x.row(i));
    double offset = 0.0;
    for (const auto& tree : model.trees) offset += predict_tree(tree, x.row(i)) - first;
    out[i] = first + offset / static_cast<double>(model.trees.size());
  }
  return out;
}

std::vector<double> feature_importance(const ExtraTreesModel& model) {
  std::vector<double> counts(model.n_features, 0.0);
  double total = 0.0;
  for (const auto& tree : model.trees) {
    for (const auto& node : tree) {
      if (node.is_leaf()) continue;
      counts[static_cast<std::size_t>(node.feature)] += 1.0;
      total += 1.0;
    }
  }
  if (total > 0.0) {
    for (double& c : counts) c /= total;
  }
  return counts;
}

void ExtraTreesModel::save(std::ostream& out) const {
  out.write(kTreeMagic, 4);
  io::write_le<std::uint32_t>(out, kTreeVersion);
  io::write_le<std::uint64_t>(out, n_features);
  io::write_le<std::uint64_t>(out, trees.size());
  io::write_le<std::uint64_t>(out, params.min_samples_split);
  io::write_le<std::uint64_t>(out, params.seed);
  for (const auto& tree : trees) {
    io::write_le<std::uint64_t>(out, tree.size());
    for (const auto& n : tree) {
      io::write_le<std::uint8_t>(out, n.is_leaf() ? 0 : 1);
      io::write_le<std::int32_t>(out, n.feature);
      io::write_le<double>(out, n.threshold);
      io::write_le<std::uint32_t>(out, n.left);
      io::write_le<std::uint32_t>(out, n.right);
      io::write_le<double>(out, n.value);
      io::write_le<std::uint32_t>(out, n.n_samples);
    }
  }
}

ExtraTreesModel ExtraTreesModel::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kTreeMagic)) throw CompatError("not a tree file");
  if (const auto v = io::read_le<std::uint32_t>(in); v != kTreeVersion) {
    throw CompatError("unsupported tree file version " + std::to_string(v));
  }
  ExtraTreesModel m;
  m.n_features = io::read_le<std::uint64_t>(in);
  const auto n_trees = io::read_le<std::uint64_t>(in);
  m.params.n_trees = n_trees;
  m.params.min_samples_split = io::read_le<std::uint64_t>(in);
  m.params.seed = io::read_le<std::uint64_t>(in);
  m.trees.resize(n_trees);
  for (auto& tree : m.trees) {
    tree.resize(io::read_le<std::uint64_t>(in));
    for (std::size_t idx = 0; idx < tree.size(); ++idx) {
      auto& n = tree[idx];
      const auto kind = io::read_le<std::uint8_t>(in);
      n.feature = io::read_le<std::int32_t>(in);
      n.threshold = io::read_le<double>(in);
      n.left = io::read_le<std::uint32_t>(in);
      n.right = io::read_le<std::uint32_t>(in);
      n.value = io::read_le<double>(in);
      n.n_samples = io::read_le<std::uint32_t>(in);
      const bool bad_split = kind == 1 && (n.feature < 0 || static_cast<std::uint64_t>(n.feature) >= m.n_features ||
                                           n.left <= idx || n.right <= idx || n.left >= tree.size() || n.right >= tree.size());
      if (kind > 1 || (kind == 0) != n.is_leaf() || bad_split) throw CompatError("corrupt tree node");
    }
  }
  return m;
}

}  // namespace baitpress
