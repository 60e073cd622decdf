// Copyright 2026 The qkinfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qkinfer/strategies.hpp"

namespace qkinfer {

struct ExperimentPlan {
  explicit ExperimentPlan(Instance inst) : instance(std::move(inst)) {}

  Instance instance;
  std::vector<StrategyId> strategies;
  std::vector<double> epsilon_grid;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  GroverBackend backend = GroverBackend::kAnalytic2d;
  double delta = 1.0 / 3.0;
  Calibration calibration = default_calibration();
  /// Worker threads; results are ordered identically for any value.
  std::size_t threads = 1;
};

struct ResultRow {
  StrategyId strategy = StrategyId::kAaoQae;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  std::uint64_t total_queries = 0;
  std::uint64_t modeled_gates = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

/// Slope of mean total_queries against 1 / epsilon for one strategy.
struct StrategySlope {
  StrategyId strategy = StrategyId::kAaoQae;
  SlopeFit fit;
};

struct ExperimentResult {
  /// Ordered by strategy (plan order), then epsilon, then trial.
  std::vector<ResultRow> rows;
  /// Present for strategies swept over at least three epsilons.
  std::vector<StrategySlope> query_slopes;
};

/// Stream key of trial `trial` at grid position `epsilon_index`.
std::uint64_t derive_trial_seed(std::uint64_t base_seed, StrategyId strategy,
                                std::size_t epsilon_index, std::size_t trial) noexcept;

/// Throws std::invalid_argument on an empty or malformed plan.
ExperimentResult run_plan(const ExperimentPlan& plan);

/// Ordinary least squares of ln y on ln x. Needs at least three points with
/// positive coordinates; otherwise throws std::invalid_argument.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Exhaustive minimum of sum M_i over integer M_i in [1, m_max] on the
/// support, subject to sum a_i^2 / M_i^r <= C. Supports at most four
/// coefficients. Throws std::invalid_argument when N > 4 or no allocation
/// within m_max is feasible.
BudgetAllocation bruteforce_allocation(const CoefDecomposition& decomp, double epsilon,
                                       double delta, int r, std::uint64_t m_max);

inline constexpr std::string_view kCsvHeader =
    "strategy,epsilon,seed,estimate,exact,abs_error,total_queries,modeled_gates";

std::string to_csv(const ExperimentResult& result);
/// Throws FormatError on a malformed document.
std::vector<ResultRow> parse_csv(const std::string& text);

/// Columns curve,strategy,x,y,yerr. Curve "error_vs_budget" has
/// x = mean queries, y = RMSE; curve "queries_vs_epsilon" has x = epsilon,
/// y = mean queries. One point per strategy and epsilon on each curve.
std::string to_plotdata(const ExperimentResult& result);

enum class EmitFormat { kCsv, kPlotdata };

/// Writes `results.csv` or `plotdata.csv` into `dir` (created if missing)
/// and returns the path. I/O failures throw std::runtime_error naming the
/// path.
std::filesystem::path emit(const ExperimentResult& result, EmitFormat format,
                           const std::filesystem::path& dir);

/// Fraction of `trials` runs within epsilon of the exact value.
double coverage(StrategyId strategy, const PreparedInstance& prepared,
                const InferenceOptions& options, std::size_t trials, std::uint64_t base_seed);

/// Smallest multiplier on the ladder 1/16, 1/8, ..., 4 whose coverage at
/// `epsilon` reaches `target`. Returns the top of the ladder when none does.
double calibrate_multiplier(StrategyId strategy, const PreparedInstance& prepared, double epsilon,
                            double delta, std::size_t trials, double target,
                            std::uint64_t base_seed, Calibration base = default_calibration());

}  // namespace qkinfer
