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

#include <array>
#include <cstddef>
#include <cstdint>

#include "qkinfer/coefkit.hpp"
#include "qkinfer/featuremap.hpp"
#include "qkinfer/strategy_id.hpp"

namespace qkinfer {

/// Gate-cost constants of one instance.
struct GateCostModel {
  std::uint64_t G = 0;   // gates per U(x)
  std::size_t N = 1;     // number of terms, also the cost of one W(alpha)
  std::size_t n = 1;     // data qubits

  static GateCostModel from(const FeatureMapSpec& spec, std::size_t num_terms);

  std::size_t idx_width() const noexcept;
  std::uint64_t training_oracle_cost() const noexcept;
};

/// Leading-order query count without constants:
/// N_s |a|_2^2 / e^2, |a|_1^2 / e^2, N_s |a|_2 / e, |a|_{2/3} / e,
/// |a|_1^2 / e^2, |a|_1 / e and |a|_1^2 / e^2 in StrategyId order, where N_s
/// is the support size.
double queries_theoretical(StrategyId strategy, const CoefDecomposition& decomp, double epsilon);

/// Modeled gates per counted query.
std::uint64_t gates_per_query(StrategyId strategy, const GateCostModel& model) noexcept;

enum class Criterion { kQueries, kGates };

struct RankedStrategy {
  StrategyId strategy;
  double queries = 0.0;
  double gates = 0.0;
};

struct Recommendation {
  StrategyId winner;
  Criterion criterion;
  /// All strategies, best first under the criterion.
  std::array<RankedStrategy, kNumStrategies> ranking;
  /// epsilon <= |a|_1^2 / |a|_{2/3}; outside it sampling can beat QAE.
  bool asymptotic_regime = true;
};

/// True when epsilon <= |a|_1^2 / |a|_{2/3}.
bool in_asymptotic_regime(const CoefDecomposition& decomp, double epsilon);

/// Argmin of the closed-form totals. Ties go to the earlier entry of a fixed
/// priority list per criterion. Inside the asymptotic regime the winner is
/// checked against all-at-once-qae (queries) or list-sum-adaptive-qae (gates)
/// and a mismatch throws std::logic_error.
Recommendation recommend(const GateCostModel& model, const CoefDecomposition& decomp,
                         double epsilon, Criterion criterion);

struct SandwichResult {
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 0.0;
  bool inside = false;
};

/// ratio = (N G + n) |a|_1 / (G |a|_{2/3}) against
/// [sqrt(N) + n / (G sqrt(N)), N + n / G]. Requires G >= 1.
SandwichResult sandwich_check(const GateCostModel& model, const CoefDecomposition& decomp);

}  // namespace qkinfer
