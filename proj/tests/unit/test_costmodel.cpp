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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qkinfer/costmodel.hpp"
#include "qkinfer/rng.hpp"
#include "qkinfer/statevec.hpp"

namespace qkinfer {
namespace {

CoefDecomposition dec(std::vector<double> a) { return decompose(CoefficientVector(std::move(a))); }

TEST(QueriesTheoretical, AllAtOnceQaeIsLinearInL1) {
  EXPECT_NEAR(queries_theoretical(StrategyId::kAaoQae, dec({1.5, -0.5}), 0.1), 20.0, 1e-12);
}

TEST(QueriesTheoretical, NaiveSampling) {
  EXPECT_NEAR(queries_theoretical(StrategyId::kLsFixedSampling, dec({0.5, 0.5, -0.5, 0.5}), 0.1), 400.0,
              1e-9);
}

TEST(QueriesTheoretical, SingleTermQaeFormulasCoincide) {
  const auto d = dec({1.0});
  EXPECT_DOUBLE_EQ(queries_theoretical(StrategyId::kLsAdaptiveQae, d, 0.07),
                   queries_theoretical(StrategyId::kAaoQae, d, 0.07));
}

TEST(GatesPerQuery, ListAndSumIsTwoFeatureMaps) {
  const GateCostModel m{10, 4, 2};
  for (StrategyId id : kAllStrategies) {
    if (is_list_and_sum(id)) EXPECT_EQ(gates_per_query(id, m), 20u);
  }
}

TEST(GatesPerQuery, AllAtOnceSamplingPlugIn) {
  EXPECT_EQ(gates_per_query(StrategyId::kAaoSampling, GateCostModel{10, 4, 2}), 94u);
}

TEST(GatesPerQuery, AmplitudeEncodingAddsDataTestAndSignCopy) {
  const GateCostModel m{10, 4, 3};
  EXPECT_EQ(gates_per_query(StrategyId::kAaoQae, m),
            gates_per_query(StrategyId::kAaoSampling, m) + mcx_cost(3) + 2);
}

TEST(GateCostModel, SingleTermTrainingOracle) {
  const GateCostModel m{7, 1, 2};
  EXPECT_EQ(m.training_oracle_cost(), 7u + 2 * mcx_cost(0));
}

TEST(Recommend, QueryAndGateWinners) {
  const auto d = dec({0.3, -1.2, 0.5, 0.05});
  const GateCostModel m{12, 4, 3};
  EXPECT_EQ(recommend(m, d, 0.01, Criterion::kQueries).winner, StrategyId::kAaoQae);
  EXPECT_EQ(recommend(m, d, 0.01, Criterion::kGates).winner, StrategyId::kLsAdaptiveQae);
}

TEST(Recommend, RankingIsSortedAndComplete) {
  const auto d = dec({0.3, -1.2, 0.5});
  const auto rec = recommend(GateCostModel{6, 3, 2}, d, 0.02, Criterion::kGates);
  for (std::size_t i = 1; i < rec.ranking.size(); ++i) EXPECT_LE(rec.ranking[i - 1].gates, rec.ranking[i].gates);
  std::vector<bool> seen(kNumStrategies, false);
  for (const auto& r : rec.ranking) seen[static_cast<std::size_t>(r.strategy)] = true;
  for (bool s : seen) EXPECT_TRUE(s);
}

TEST(Recommend, SingleTermGateTotals) {
  // AAO pays for W and the training oracle even when N = 1.
  const auto d = dec({0.8});
  const GateCostModel m{10, 1, 2};
  const double eps = 0.05;
  const double ls = 2.0 * 10 * queries_theoretical(StrategyId::kLsAdaptiveQae, d, eps);
  const double aao = static_cast<double>(gates_per_query(StrategyId::kAaoQae, m)) *
                     queries_theoretical(StrategyId::kAaoQae, d, eps);
  EXPECT_LT(ls, aao);
  const auto rec = recommend(m, d, eps, Criterion::kGates);
  EXPECT_EQ(rec.winner, StrategyId::kLsAdaptiveQae);
  EXPECT_NEAR(rec.ranking[0].gates, ls, 1e-9 * ls);
}

TEST(Regime, BoundaryCondition) {
  const auto d = dec({1.0, 1.0});
  const double bound = 4.0 / pnorm(d, kTwoThirds);
  EXPECT_TRUE(in_asymptotic_regime(d, bound));
  EXPECT_FALSE(in_asymptotic_regime(d, bound * 1.01));
}

TEST(Sandwich, EqualMagnitudesSitAtTheLowerEnd) {
  const GateCostModel m{5, 9, 2};
  const auto s = sandwich_check(m, dec(std::vector<double>(9, 0.4)));
  EXPECT_NEAR(s.ratio, s.lower, 1e-12 * s.lower);
  EXPECT_TRUE(s.inside);
}

TEST(Sandwich, OneHotSitsAtTheUpperEnd) {
  const GateCostModel m{5, 6, 2};
  const auto s = sandwich_check(m, dec({0, 0, 2.0, 0, 0, 0}));
  EXPECT_NEAR(s.ratio, s.upper, 1e-12 * s.upper);
  EXPECT_TRUE(s.inside);
}

TEST(Sandwich, RequiresGates) {
  EXPECT_THROW(sandwich_check(GateCostModel{0, 2, 1}, dec({1, 1})), std::invalid_argument);
}

TEST(CostmodelProperty, SandwichHoldsOnRandomVectors) {
  SeededStream rng(701);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t N = 1 + rng() % 64;
    std::vector<double> a(N);
    for (double& v : a) v = (2.0 * rng.uniform() - 1.0) * std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    const GateCostModel m{1 + rng() % 200, N, 1 + rng() % 6};
    ASSERT_TRUE(sandwich_check(m, dec(a)).inside);
  }
}

TEST(CostmodelProperty, WinnersOnRandomGrid) {
  SeededStream rng(702);
  for (int t = 0; t < 300; ++t) {
    const std::size_t N = 1 + rng() % 32;
    std::vector<double> a(N);
    for (double& v : a) v = 2.0 * rng.uniform() - 1.0;
    const auto d = dec(a);
    const GateCostModel m{1 + rng() % 300, N, 1 + rng() % 6};
    const double eps = std::min(0.2, pnorm(d, 1.0) * pnorm(d, 1.0) / pnorm(d, kTwoThirds)) * rng.uniform();
    if (!(eps > 0.0)) continue;
    ASSERT_EQ(recommend(m, d, eps, Criterion::kQueries).winner, StrategyId::kAaoQae);
    ASSERT_EQ(recommend(m, d, eps, Criterion::kGates).winner, StrategyId::kLsAdaptiveQae);
  }
}

}  // namespace
}  // namespace qkinfer
