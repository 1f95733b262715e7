#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "baitpress/stacking.hpp"

namespace baitpress::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCompat = 3;
inline constexpr int kExitMismatch = 4;

struct RunConfig {
  std::optional<std::string> instances;
  std::optional<std::string> truth;
  std::optional<std::string> model;
  std::optional<std::string> out;
  std::optional<std::string> results;
  std::optional<std::string> external;
  std::optional<std::string> report;
  StackConfig stack;
  std::vector<double> grid = default_c_grid();
  std::size_t top_k = 10;
};

/// Applies a JSON config file on top of `cfg`. Recognized keys: features,
/// folds, seed, jobs, minDf, grid, nTrees, minSamplesSplit, tolerance,
/// maxIterations, externalC, and "c" as {"postText/mean": 0.1, ...}.
void apply_config_file(RunConfig& cfg, const std::string& path);

int cmd_train(const RunConfig& cfg, std::ostream& out);
int cmd_predict(const RunConfig& cfg, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out);
int cmd_tune(const RunConfig& cfg, std::ostream& out);
int cmd_inspect(const RunConfig& cfg, std::ostream& out);

/// Parses arguments, dispatches, and maps exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace baitpress::cli
