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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qkinfer/harness.hpp"
#include "qkinfer/strategies.hpp"

namespace qkinfer {
namespace {

FeatureMapSpec ry_cz(std::size_t n, std::size_t layers) {
  FeatureMapSpec s;
  s.family = FeatureFamily::kAngleRyCz;
  s.num_qubits = n;
  s.num_layers = layers;
  return s;
}

Instance random_instance(std::uint64_t seed, std::size_t n, std::size_t N) {
  SeededStream rng(seed);
  std::vector<LabeledPoint> pts;
  std::vector<double> alpha;
  auto point = [&] {
    DataPoint x;
    for (std::size_t j = 0; j < n; ++j) x.coordinates.push_back(std::numbers::pi * rng.uniform());
    return x;
  };
  for (std::size_t i = 0; i < N; ++i) {
    pts.push_back({point(), 1.0});
    alpha.push_back(2.0 * rng.uniform() - 1.0);
  }
  return Instance{ry_cz(n, 2), CoefficientVector(alpha), TrainingSet(pts), point()};
}

Instance identity_instance(std::vector<double> alpha) {
  FeatureMapSpec s;
  s.family = FeatureFamily::kIdentity;
  s.num_qubits = 1;
  std::vector<LabeledPoint> pts;
  for (std::size_t i = 0; i < alpha.size(); ++i) pts.push_back({DataPoint{{0.1 * i}}, 1.0});
  return Instance{s, CoefficientVector(alpha), TrainingSet(pts), DataPoint{{0.5}}};
}

double coverage_of(StrategyId id, const PreparedInstance& p, double eps, int trials, std::uint64_t base) {
  InferenceOptions o;
  o.epsilon = eps;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    hits += infer(id, p, o, SeededStream::derive({base, static_cast<std::uint64_t>(t)})).abs_error() <= eps;
  }
  return static_cast<double>(hits) / trials;
}

TEST(Budget, VarianceBudgetFormula) {
  EXPECT_NEAR(variance_budget(0.1, 1.0 / 3.0), 0.01 / (2 * std::log(6.0)), 1e-18);
  EXPECT_THROW(variance_budget(0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(variance_budget(0.1, 1.0), std::invalid_argument);
}

TEST(Budget, SamplingRatioFollowsMagnitude) {
  const auto a = allocate_budget(decompose(CoefficientVector({3, 1})), 0.001, 0.1, 1);
  EXPECT_NEAR(static_cast<double>(a.per_index[0]) / a.per_index[1], 3.0, 1e-3);
}

TEST(Budget, QaeRatioFollowsTwoThirdsPower) {
  const auto a = allocate_budget(decompose(CoefficientVector({8, 1})), 0.0001, 0.1, 2);
  EXPECT_NEAR(static_cast<double>(a.per_index[0]) / a.per_index[1], 4.0, 1e-3);
}

TEST(Budget, SymmetricCoefficientsGetEqualShares) {
  const auto a = allocate_budget(decompose(CoefficientVector({1, 1, 1})), 0.05, 0.1, 2);
  EXPECT_EQ(a.per_index[0], a.per_index[1]);
  EXPECT_EQ(a.per_index[1], a.per_index[2]);
}

TEST(Budget, ZeroCoefficientsAreSkipped) {
  const auto a = allocate_budget(decompose(CoefficientVector({1, 0, 2})), 0.05, 0.1, 1);
  EXPECT_EQ(a.per_index[1], 0u);
  EXPECT_GE(a.per_index[0], 1u);
  EXPECT_EQ(a.total, a.per_index[0] + a.per_index[2]);
}

TEST(StrategiesProperty, AllocationIsFeasible) {
  SeededStream rng(601);
  for (int t = 0; t < 500; ++t) {
    const std::size_t N = 1 + rng() % 16;
    std::vector<double> alpha(N);
    for (double& a : alpha) a = (2.0 * rng.uniform() - 1.0) * std::pow(10.0, 2.0 * rng.uniform() - 1.0);
    const auto d = decompose(CoefficientVector(alpha));
    const double eps = 0.01 + 0.2 * rng.uniform();
    const double delta = 0.05 + 0.4 * rng.uniform();
    for (int r : {1, 2}) {
      const auto a = allocate_budget(d, eps, delta, r);
      ASSERT_LE(allocation_variance(d, a, r), variance_budget(eps, delta));
      for (std::size_t i : d.support()) ASSERT_GE(a.per_index[i], 1u);
    }
  }
}

TEST(StrategiesProperty, AllocationWithinFivePercentOfBruteForce) {
  SeededStream rng(602);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> alpha(3);
    for (double& a : alpha) a = 2.0 * rng.uniform() - 1.0;
    const auto d = decompose(CoefficientVector(alpha));
    for (int r : {1, 2}) {
      const auto closed = allocate_budget(d, 0.0125, 1.0 / 3.0, r);
      const auto brute = bruteforce_allocation(d, 0.0125, 1.0 / 3.0, r,
                                               2 * *std::max_element(closed.per_index.begin(),
                                                                     closed.per_index.end()) + 16);
      ASSERT_GE(static_cast<double>(brute.total), 0.95 * static_cast<double>(closed.total));
      ASSERT_LE(brute.total, closed.total);
    }
  }
}

TEST(Infer, IdentityMapRecoversTheCoefficient) {
  const PreparedInstance p(identity_instance({1.0}));
  InferenceOptions o;
  o.epsilon = 0.1;
  for (StrategyId id : kAllStrategies) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      ASSERT_NEAR(infer(id, p, o, seed).estimate, 1.0, 0.1) << strategy_name(id);
    }
  }
}

TEST(Infer, AllAtOnceQaeSingleTermCoverage) {
  auto inst = random_instance(31, 2, 1);
  const double f = inst.alpha[0] * kernel_exact(inst.spec, inst.x, inst.training[0].x);
  const PreparedInstance p(inst);
  InferenceOptions o;
  o.epsilon = 0.05;
  int hits = 0;
  for (std::uint64_t s = 0; s < 300; ++s) hits += std::abs(infer(StrategyId::kAaoQae, p, o, s).estimate - f) <= 0.05;
  EXPECT_GE(hits, 200);
}

TEST(Infer, PrecisionContractOnRandomInstance) {
  const PreparedInstance p(random_instance(7, 2, 4));
  for (StrategyId id : kAllStrategies) {
    EXPECT_GE(coverage_of(id, p, 0.05, 500, 41), 2.0 / 3.0) << strategy_name(id);
  }
}

TEST(Infer, SamplingPathsAreUnbiased) {
  const PreparedInstance p(random_instance(8, 2, 4));
  InferenceOptions o;
  o.epsilon = 0.1;
  for (StrategyId id : {StrategyId::kLsFixedSampling, StrategyId::kAaoSampling}) {
    double sum = 0.0, sum2 = 0.0;
    const int trials = 2000;
    for (int t = 0; t < trials; ++t) {
      const double e = infer(id, p, o, SeededStream::derive({55, static_cast<std::uint64_t>(t)})).estimate;
      sum += e;
      sum2 += e * e;
    }
    const double mean = sum / trials;
    const double sem = std::sqrt((sum2 / trials - mean * mean) / (trials - 1));
    EXPECT_LE(std::abs(mean - p.exact()), 4.0 * sem) << strategy_name(id);
  }
}

TEST(Infer, ReportInvariants) {
  const PreparedInstance p(random_instance(9, 2, 3));
  InferenceOptions o;
  for (StrategyId id : kAllStrategies) {
    const auto r = infer(id, p, o, 3);
    EXPECT_EQ(r.allocation.has_value(), is_adaptive(id)) << strategy_name(id);
    EXPECT_EQ(r.modeled_gates, gates_per_query(id, p.cost_model()) * r.total_queries());
    EXPECT_EQ(r.abs_error(), std::abs(r.estimate - r.exact));
    EXPECT_EQ(r.exact, p.exact());
    EXPECT_EQ(r.strategy, id);
    EXPECT_EQ(r.seed, 3u);
  }
}

TEST(Infer, ListAndSumChargesTwoFeatureMapsPerQuery) {
  const PreparedInstance p(random_instance(10, 2, 3));
  InferenceOptions o;
  for (StrategyId id : kAllStrategies) {
    if (!is_list_and_sum(id)) continue;
    const auto r = infer(id, p, o, 4);
    EXPECT_EQ(r.counter[OracleKind::kUx], 2 * r.total_queries()) << strategy_name(id);
  }
}

TEST(Infer, DeterministicGivenSeed) {
  const PreparedInstance p(random_instance(11, 2, 4));
  InferenceOptions o;
  for (StrategyId id : kAllStrategies) {
    const auto a = infer(id, p, o, 77), b = infer(id, p, o, 77);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.counter, b.counter);
  }
}

TEST(Infer, SampleAverageMatchesAdaptiveSamplingSlope) {
  ExperimentPlan plan(random_instance(12, 2, 4));
  plan.strategies = {StrategyId::kSampleAverage, StrategyId::kLsAdaptiveSampling};
  plan.epsilon_grid = {0.1, 0.05, 0.025, 0.0125};
  plan.trials = 10;
  const auto res = run_plan(plan);
  ASSERT_EQ(res.query_slopes.size(), 2u);
  EXPECT_NEAR(res.query_slopes[0].fit.slope, res.query_slopes[1].fit.slope, 0.1);
}

TEST(Infer, QaeInnerVariantRuns) {
  const PreparedInstance p(random_instance(13, 2, 4));
  InferenceOptions o;
  o.sample_average_qae_inner = true;
  const auto r = infer(StrategyId::kSampleAverage, p, o, 1);
  EXPECT_GT(r.counter[OracleKind::kV] + r.counter[OracleKind::kUx], 0u);
  EXPECT_TRUE(std::isfinite(r.estimate));
}

TEST(Infer, FullstateBackendAgreesWithAnalytic) {
  const auto inst = random_instance(14, 1, 2);
  const PreparedInstance a(inst, GroverBackend::kAnalytic2d);
  const PreparedInstance f(inst, GroverBackend::kFullstate);
  InferenceOptions o;
  o.epsilon = 0.1;
  for (StrategyId id : kAllStrategies) {
    const auto ra = infer(id, a, o, 5), rf = infer(id, f, o, 5);
    EXPECT_NEAR(ra.estimate, rf.estimate, 1e-9) << strategy_name(id);
    EXPECT_EQ(ra.counter, rf.counter);
  }
}

TEST(SignOf, TieGoesPositive) {
  EstimateReport r;
  r.estimate = 0.3;
  EXPECT_EQ(sign_of(r), 1);
  r.estimate = -0.3;
  EXPECT_EQ(sign_of(r), -1);
  r.estimate = 0.0;
  EXPECT_EQ(sign_of(r), 1);
}

TEST(StrategyNames, RoundTripBothSpellings) {
  for (StrategyId id : kAllStrategies) {
    EXPECT_EQ(parse_strategy(strategy_name(id)), id);
    EXPECT_EQ(parse_strategy(strategy_enum_name(id)), id);
  }
  EXPECT_FALSE(parse_strategy("greedy").has_value());
}

}  // namespace
}  // namespace qkinfer
