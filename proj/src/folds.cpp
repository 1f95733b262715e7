#include "baitpress/folds.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace baitpress {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FoldPlan make_folds(std::size_t n_rows, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (n_rows < n_folds) {
    throw std::invalid_argument("cannot split " + std::to_string(n_rows) + " rows into " + std::to_string(n_folds) + " folds");
  }
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  plan.assignment.resize(n_rows);
  for (std::size_t pos = 0; pos < n_rows; ++pos) plan.assignment[order[pos]] = pos % n_folds;
  return plan;
}

std::vector<std::size_t> FoldPlan::rows_in(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::rows_outside(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) rows.push_back(i);
  }
  return rows;
}

}  // namespace baitpress
