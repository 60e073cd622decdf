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

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qkinfer/calibration.hpp"
#include "qkinfer/coefkit.hpp"
#include "qkinfer/costmodel.hpp"
#include "qkinfer/estimate.hpp"
#include "qkinfer/featuremap.hpp"
#include "qkinfer/oracles.hpp"
#include "qkinfer/rng.hpp"
#include "qkinfer/strategy_id.hpp"

namespace qkinfer {

/// eps^2 / (2 ln(2 / delta)).
double variance_budget(double epsilon, double delta);

struct BudgetAllocation {
  /// One entry per coefficient; zero coefficients get 0.
  std::vector<std::uint64_t> per_index;
  std::uint64_t total = 0;
};

/// M_i = max(1, ceil(m * |a_i|^(2/(r+1)) * |a|_{2/(r+1)}^(2/(r(r+1))) / C^(1/r)))
/// over the support, with C = variance_budget(eps, delta) and m the
/// multiplier. r = 1 for sampling, r = 2 for amplitude estimation.
BudgetAllocation allocate_budget(const CoefDecomposition& decomp, double epsilon, double delta,
                                 int r, double multiplier = 1.0);

/// Per-term budget of the fixed list-and-sum strategies:
/// ceil(ceil(m * N_s * |a|_2^(2/r) / C^(1/r)) / N_s) on every support index.
BudgetAllocation fixed_budget(const CoefDecomposition& decomp, double epsilon, double delta,
                              int r, double multiplier = 1.0);

/// sum_i a_i^2 / M_i^r over the support.
double allocation_variance(const CoefDecomposition& decomp, const BudgetAllocation& allocation,
                           int r);

struct Instance {
  FeatureMapSpec spec;
  CoefficientVector alpha;
  TrainingSet training;
  DataPoint x;
};

/// Everything about an instance that does not depend on the random seed.
///
/// Exact probabilities come from the circuits (kernel circuits A_i, the
/// all-at-once circuit and V), independently of `f_exact`, which provides
/// the reference value.
class PreparedInstance {
 public:
  explicit PreparedInstance(Instance instance, GroverBackend backend = GroverBackend::kAnalytic2d);

  const Instance& instance() const noexcept { return instance_; }
  const CoefDecomposition& decomposition() const noexcept { return decomp_; }
  const GateCostModel& cost_model() const noexcept { return model_; }
  GroverBackend backend() const noexcept { return backend_; }
  double exact() const noexcept { return exact_; }
  /// P(data = 0) after A_i, per coefficient.
  const std::vector<double>& kernel_probabilities() const noexcept { return kernel_probs_; }
  /// P(data = 0, sign = 0) and P(data = 0, sign = 1) of the all-at-once circuit.
  double aao_plus() const noexcept { return aao_plus_; }
  double aao_minus() const noexcept { return aao_minus_; }
  const GroverSpec& kernel_grover(std::size_t i) const { return kernel_grover_.at(i); }
  /// Throws WidthOverflowError when V does not fit.
  const GroverSpec& v_plus() const;
  const GroverSpec& v_minus() const;

 private:
  Instance instance_;
  GroverBackend backend_;
  CoefDecomposition decomp_;
  GateCostModel model_;
  double exact_ = 0.0;
  std::vector<double> kernel_probs_;
  std::vector<GroverSpec> kernel_grover_;
  double aao_plus_ = 0.0;
  double aao_minus_ = 0.0;
  std::optional<GroverSpec> v_plus_;
  std::optional<GroverSpec> v_minus_;
};

struct InferenceOptions {
  double epsilon = 0.05;
  double delta = 1.0 / 3.0;
  Calibration calibration = default_calibration();
  /// sample-average only: estimate each inner kernel with amplitude
  /// estimation at precision 1 / sample_average_qae_inner_shots.
  bool sample_average_qae_inner = false;
};

struct EstimateReport {
  StrategyId strategy = StrategyId::kAaoQae;
  double estimate = 0.0;
  double exact = 0.0;
  double epsilon_target = 0.0;
  double delta = 0.0;
  QueryCounter counter;
  std::uint64_t gates_per_query = 0;
  std::uint64_t modeled_gates = 0;
  std::optional<BudgetAllocation> allocation;
  std::uint64_t seed = 0;
  /// Amplitude-estimation runs whose estimate fell below their precision.
  std::uint64_t below_precision_runs = 0;

  double abs_error() const noexcept { return estimate > exact ? estimate - exact : exact - estimate; }
  std::uint64_t total_queries() const noexcept { return counter.total_queries(); }
};

/// Runs one strategy with randomness drawn from SeededStream(seed).
EstimateReport infer(StrategyId strategy, const PreparedInstance& prepared,
                     const InferenceOptions& options, std::uint64_t seed);

/// +1 for a nonnegative estimate, -1 otherwise.
int sign_of(const EstimateReport& report) noexcept;

}  // namespace qkinfer
