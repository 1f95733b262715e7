#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace baitpress {

/// Assignment of rows to cross-validation folds.
struct FoldPlan {
  std::size_t n_folds = 5;
  std::vector<std::size_t> assignment;  // row -> fold
  std::uint64_t seed = 0;

  std::vector<std::size_t> rows_in(std::size_t fold) const;
  std::vector<std::size_t> rows_outside(std::size_t fold) const;
};

/// Shuffled round-robin partition: fold sizes differ by at most one.
/// Throws std::invalid_argument unless n_rows >= n_folds >= 2.
FoldPlan make_folds(std::size_t n_rows, std::size_t n_folds, std::uint64_t seed);

/// Derives an independent seed for a sub-task (splitmix64 of the pair).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace baitpress
