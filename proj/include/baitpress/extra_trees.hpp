#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace baitpress {

/// Dense row-major matrix of meta-features with named columns
/// ("postText mean", "targetTitle std", ...).
struct MetaFeatures {
  std::vector<std::string> columns;
  std::vector<double> values;  // n_rows * n_cols, row-major

  MetaFeatures() = default;
  MetaFeatures(std::vector<std::string> names, std::size_t n_rows)
      : columns(std::move(names)), values(n_rows * columns.size(), 0.0) {}

  std::size_t n_cols() const noexcept { return columns.size(); }
  std::size_t n_rows() const noexcept { return columns.empty() ? 0 : values.size() / columns.size(); }
  double& at(std::size_t row, std::size_t col) { return values[row * n_cols() + col]; }
  double at(std::size_t row, std::size_t col) const { return values[row * n_cols() + col]; }
  std::span<const double> row(std::size_t r) const { return std::span(values).subspan(r * n_cols(), n_cols()); }
  MetaFeatures select_rows(std::span<const std::size_t> rows) const;
};

struct ExtraTreesParams {
  std::size_t n_trees = 100;
  std::size_t min_samples_split = 5;
  std::uint64_t seed = 0;
  bool operator==(const ExtraTreesParams&) const = default;
};

/// Node of a fitted tree, stored in preorder. Leaves have feature == -1.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;  // rows with x[feature] <= threshold go left
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  // mean target of the training rows that reached the node
  std::uint32_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

using Tree = std::vector<TreeNode>;

struct ExtraTreesModel {
  std::vector<Tree> trees;
  std::size_t n_features = 0;
  ExtraTreesParams params;

  /// Binary layout, little-endian: "BPET", u32 version, u64 n_features,
  /// u64 n_trees, u64 min_samples_split, u64 seed; per tree u64 n_nodes then
  /// per node u8 kind (0 leaf, 1 split), i32 feature, f64 threshold,
  /// u32 left, u32 right, f64 value, u32 n_samples.
  void save(std::ostream& out) const;
  static ExtraTreesModel load(std::istream& in);
  bool operator==(const ExtraTreesModel&) const = default;
};

/// Extremely randomized trees regressor: no bootstrap; at each node one
/// uniform threshold per non-constant feature, best variance reduction wins.
/// Trees are independent and built on up to `jobs` threads.
ExtraTreesModel train_extratrees(const MetaFeatures& x, std::span<const double> y, const ExtraTreesParams& params,
                                 std::size_t jobs = 1);

/// Average of per-tree leaf values (unclamped).
std::vector<double> predict_extratrees(const ExtraTreesModel& model, const MetaFeatures& x);

double predict_tree(const Tree& tree, std::span<const double> row);

/// Share of internal nodes, over all trees, that split on each feature.
/// All zeros when no tree has a split.
std::vector<double> feature_importance(const ExtraTreesModel& model);

}  // namespace baitpress
