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

#include "qkinfer/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qkinfer/oracles.hpp"
#include "qkinfer/statevec.hpp"

namespace qkinfer {

GateCostModel GateCostModel::from(const FeatureMapSpec& spec, std::size_t num_terms) {
  return {spec.gate_count(), num_terms, spec.num_qubits};
}

std::size_t GateCostModel::idx_width() const noexcept { return ceil_log2(N); }

std::uint64_t GateCostModel::training_oracle_cost() const noexcept { return o_dagger_cost(G, N); }

double queries_theoretical(StrategyId strategy, const CoefDecomposition& decomp,
                           double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto support = static_cast<double>(decomp.support().size());
  const double l1 = decomp.l1_norm;
  switch (strategy) {
    case StrategyId::kLsFixedSampling: {
      const double l2 = pnorm(decomp, 2.0);
      return support * l2 * l2 / (epsilon * epsilon);
    }
    case StrategyId::kLsFixedQae:
      return support * pnorm(decomp, 2.0) / epsilon;
    case StrategyId::kLsAdaptiveQae:
      return pnorm(decomp, kTwoThirds) / epsilon;
    case StrategyId::kAaoQae:
      return l1 / epsilon;
    case StrategyId::kLsAdaptiveSampling:
    case StrategyId::kAaoSampling:
    case StrategyId::kSampleAverage:
      return l1 * l1 / (epsilon * epsilon);
  }
  throw std::invalid_argument("unknown strategy");
}

std::uint64_t gates_per_query(StrategyId strategy, const GateCostModel& model) noexcept {
  const std::uint64_t aao = model.G + model.N + model.training_oracle_cost();
  switch (strategy) {
    case StrategyId::kAaoSampling: return aao;
    case StrategyId::kAaoQae: return aao + mcx_cost(model.n) + 2;
    default: return 2 * model.G;
  }
}

bool in_asymptotic_regime(const CoefDecomposition& decomp, double epsilon) {
  const double l1 = decomp.l1_norm;
  return epsilon <= l1 * l1 / pnorm(decomp, kTwoThirds);
}

namespace {

constexpr std::array<StrategyId, kNumStrategies> kQueryPriority = {
    StrategyId::kAaoQae,         StrategyId::kLsAdaptiveQae,      StrategyId::kLsFixedQae,
    StrategyId::kAaoSampling,    StrategyId::kSampleAverage,      StrategyId::kLsAdaptiveSampling,
    StrategyId::kLsFixedSampling,
};

constexpr std::array<StrategyId, kNumStrategies> kGatePriority = {
    StrategyId::kLsAdaptiveQae,      StrategyId::kLsFixedQae,    StrategyId::kAaoQae,
    StrategyId::kLsAdaptiveSampling, StrategyId::kSampleAverage, StrategyId::kAaoSampling,
    StrategyId::kLsFixedSampling,
};

}  // namespace

Recommendation recommend(const GateCostModel& model, const CoefDecomposition& decomp,
                         double epsilon, Criterion criterion) {
  const auto& priority = criterion == Criterion::kQueries ? kQueryPriority : kGatePriority;
  Recommendation rec{priority[0], criterion, {}, in_asymptotic_regime(decomp, epsilon)};
  for (std::size_t i = 0; i < kNumStrategies; ++i) {
    const StrategyId id = priority[i];
    const double q = queries_theoretical(id, decomp, epsilon);
    rec.ranking[i] = {id, q, q * static_cast<double>(gates_per_query(id, model))};
  }
  auto key = [criterion](const RankedStrategy& r) {
    return criterion == Criterion::kQueries ? r.queries : r.gates;
  };
  std::stable_sort(rec.ranking.begin(), rec.ranking.end(),
                   [&](const RankedStrategy& a, const RankedStrategy& b) { return key(a) < key(b); });
  // Totals within round-off of the minimum count as ties.
  const double best = key(rec.ranking.front());
  for (StrategyId id : priority) {
    auto it = std::find_if(rec.ranking.begin(), rec.ranking.end(),
                           [id](const RankedStrategy& r) { return r.strategy == id; });
    if (key(*it) <= best * (1.0 + 1e-12)) {
      std::rotate(rec.ranking.begin(), it, it + 1);
      break;
    }
  }
  rec.winner = rec.ranking.front().strategy;

  if (rec.asymptotic_regime) {
    const StrategyId expected =
        criterion == Criterion::kQueries ? StrategyId::kAaoQae : StrategyId::kLsAdaptiveQae;
    if (rec.winner != expected) {
      throw std::logic_error("recommender: " + std::string(strategy_name(rec.winner)) +
                             " beats " + std::string(strategy_name(expected)) +
                             " inside the asymptotic regime");
    }
  }
  return rec;
}

SandwichResult sandwich_check(const GateCostModel& model, const CoefDecomposition& decomp) {
  if (model.G == 0) throw std::invalid_argument("sandwich_check requires G >= 1");
  const auto G = static_cast<double>(model.G);
  const auto N = static_cast<double>(model.N);
  const auto n = static_cast<double>(model.n);
  SandwichResult r;
  r.lower = std::sqrt(N) + n / (G * std::sqrt(N));
  r.upper = N + n / G;
  r.ratio = (N * G + n) * decomp.l1_norm / (G * pnorm(decomp, kTwoThirds));
  constexpr double kSlack = 1e-12;
  r.inside = r.ratio >= r.lower * (1.0 - kSlack) && r.ratio <= r.upper * (1.0 + kSlack);
  return r;
}

}  // namespace qkinfer
