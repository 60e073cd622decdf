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
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "qkinfer/errors.hpp"
#include "qkinfer/harness.hpp"

namespace qkinfer {
namespace {

Instance small_instance() {
  FeatureMapSpec s;
  s.num_qubits = 2;
  s.num_layers = 2;
  std::vector<LabeledPoint> pts{{DataPoint{{0.3, 1.1}}, 1.0},
                                {DataPoint{{2.0, 0.4}}, -1.0},
                                {DataPoint{{1.2, 2.9}}, 1.0}};
  return Instance{s, CoefficientVector({0.6, -0.9, 0.4}), TrainingSet(pts), DataPoint{{0.8, 1.5}}};
}

ExperimentPlan plan_for(std::vector<StrategyId> strategies, std::vector<double> eps, std::size_t trials) {
  ExperimentPlan p(small_instance());
  p.strategies = std::move(strategies);
  p.epsilon_grid = std::move(eps);
  p.trials = trials;
  p.base_seed = 123;
  return p;
}

TEST(RunPlan, OneCellOneRow) {
  const auto r = run_plan(plan_for({StrategyId::kAaoQae}, {0.1}, 1));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.query_slopes.empty());
}

TEST(RunPlan, RerunIsBitIdentical) {
  const auto plan = plan_for({StrategyId::kAaoSampling, StrategyId::kLsAdaptiveQae}, {0.1, 0.05}, 3);
  EXPECT_EQ(run_plan(plan).rows, run_plan(plan).rows);
}

TEST(RunPlan, ThreadCountDoesNotChangeRows) {
  auto plan = plan_for({StrategyId::kAaoSampling, StrategyId::kSampleAverage}, {0.1, 0.05}, 4);
  const auto serial = run_plan(plan).rows;
  plan.threads = 3;
  EXPECT_EQ(run_plan(plan).rows, serial);
}

TEST(RunPlan, StrategyOrderDoesNotChangeResults) {
  const auto ab = run_plan(plan_for({StrategyId::kAaoSampling, StrategyId::kLsFixedQae}, {0.1}, 3)).rows;
  const auto ba = run_plan(plan_for({StrategyId::kLsFixedQae, StrategyId::kAaoSampling}, {0.1}, 3)).rows;
  ASSERT_EQ(ab.size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(ab[i], ba[i + 3]);
    EXPECT_EQ(ab[i + 3], ba[i]);
  }
}

TEST(RunPlan, SamplingSlopeIsTwo) {
  const auto r = run_plan(plan_for({StrategyId::kAaoSampling}, {0.1, 0.05, 0.025, 0.0125}, 5));
  ASSERT_EQ(r.query_slopes.size(), 1u);
  EXPECT_NEAR(r.query_slopes[0].fit.slope, 2.0, 0.1);
}

TEST(RunPlan, RejectsEmptyPlans) {
  EXPECT_THROW(run_plan(plan_for({}, {0.1}, 1)), std::invalid_argument);
  EXPECT_THROW(run_plan(plan_for({StrategyId::kAaoQae}, {}, 1)), std::invalid_argument);
  EXPECT_THROW(run_plan(plan_for({StrategyId::kAaoQae}, {0.1}, 0)), std::invalid_argument);
}

TEST(FitSlope, ExactPowerLaws) {
  std::vector<std::pair<double, double>> sq, inv;
  for (double x : {1.0, 2.0, 4.0, 8.0}) {
    sq.emplace_back(x, x * x);
    inv.emplace_back(x, 3.0 / x);
  }
  const auto f = fit_loglog_slope(sq);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-10);
  EXPECT_NEAR(fit_loglog_slope(inv).slope, -1.0, 1e-12);
}

TEST(FitSlope, NoisySquareRoot) {
  SeededStream rng(801);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 12; ++i) {
    const double x = std::pow(2.0, i);
    pts.emplace_back(x, std::sqrt(x) * (1.0 + 0.05 * (2.0 * rng.uniform() - 1.0)));
  }
  EXPECT_NEAR(fit_loglog_slope(pts).slope, 0.5, 0.1);
}

TEST(FitSlope, NeedsThreePositivePoints) {
  EXPECT_THROW(fit_loglog_slope({{1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(fit_loglog_slope({{1, 1}, {2, 2}, {3, 0}}), std::invalid_argument);
}

TEST(BruteForce, SingleTerm) {
  const auto d = decompose(CoefficientVector({0.7}));
  const double C = variance_budget(0.1, 0.2);
  for (int r : {1, 2}) {
    const auto a = bruteforce_allocation(d, 0.1, 0.2, r, 100000);
    const double m = static_cast<double>(a.total);
    EXPECT_LE(0.49 / std::pow(m, r), C);
    EXPECT_GT(0.49 / std::pow(m - 1.0, r), C);
  }
}

TEST(BruteForce, SymmetricSamplingSharesNearlyEqually) {
  const auto a = bruteforce_allocation(decompose(CoefficientVector({0.5, -0.5, 0.5})), 0.1, 0.3, 1, 2000);
  const auto equal = static_cast<std::uint64_t>(std::ceil(0.75 / variance_budget(0.1, 0.3)));
  EXPECT_LE(a.total, 3 * equal);
  const auto [lo, hi] = std::minmax_element(a.per_index.begin(), a.per_index.end());
  EXPECT_LE(static_cast<double>(*hi - *lo), 0.05 * static_cast<double>(equal));
}

TEST(BruteForce, WithinFivePercentOfClosedForm) {
  const auto d = decompose(CoefficientVector({3, 1}));
  const auto closed = allocate_budget(d, 0.5, 0.2, 1);
  const auto brute = bruteforce_allocation(d, 0.5, 0.2, 1, 4 * closed.total);
  EXPECT_GE(static_cast<double>(brute.total), 0.95 * static_cast<double>(closed.total));
}

TEST(BruteForce, MatchesNaiveEnumeration) {
  SeededStream rng(802);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> alpha(3);
    for (double& a : alpha) a = 2.0 * rng.uniform() - 1.0;
    const auto d = decompose(CoefficientVector(alpha));
    const double C = variance_budget(0.3, 0.3);
    const int r = 1 + t % 2;
    const std::uint64_t m_max = 60;
    std::uint64_t best = UINT64_MAX;
    for (std::uint64_t a = 1; a <= m_max; ++a)
      for (std::uint64_t b = 1; b <= m_max; ++b)
        for (std::uint64_t c = 1; c <= m_max; ++c) {
          const double v = alpha[0] * alpha[0] / std::pow(a, r) + alpha[1] * alpha[1] / std::pow(b, r) +
                           alpha[2] * alpha[2] / std::pow(c, r);
          if (v <= C) best = std::min(best, a + b + c);
        }
    if (best == UINT64_MAX) {
      EXPECT_THROW(bruteforce_allocation(d, 0.3, 0.3, r, m_max), std::invalid_argument);
    } else {
      EXPECT_EQ(bruteforce_allocation(d, 0.3, 0.3, r, m_max).total, best);
    }
  }
}

TEST(BruteForce, RejectsLargeInputs) {
  EXPECT_THROW(bruteforce_allocation(decompose(CoefficientVector({1, 1, 1, 1, 1})), 0.1, 0.1, 1, 10),
               std::invalid_argument);
}

TEST(Csv, OneRowHasHeaderAndOneLine) {
  const auto csv = to_csv(run_plan(plan_for({StrategyId::kAaoQae}, {0.1}, 1)));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], kCsvHeader);
  EXPECT_EQ(lines[1].rfind("all-at-once-qae,", 0), 0u);
}

TEST(Csv, RoundTrip) {
  const auto r = run_plan(plan_for({StrategyId::kAaoSampling, StrategyId::kLsFixedQae}, {0.1, 0.05}, 2));
  EXPECT_EQ(parse_csv(to_csv(r)), r.rows);
}

TEST(Csv, MalformedInputThrows) {
  EXPECT_THROW(parse_csv("nope\n"), FormatError);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\nall-at-once-qae,0.1\n"), FormatError);
}

TEST(Plotdata, FourPointsPerCurvePerStrategy) {
  const auto r = run_plan(plan_for({StrategyId::kAaoSampling, StrategyId::kAaoQae},
                                   {0.1, 0.05, 0.025, 0.0125}, 2));
  std::istringstream in(to_plotdata(r));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "curve,strategy,x,y,yerr");
  std::map<std::string, int> counts;
  while (std::getline(in, line)) {
    const auto a = line.find(','), b = line.find(',', a + 1);
    ++counts[line.substr(0, b)];
  }
  EXPECT_EQ(counts.size(), 4u);
  for (const auto& [k, v] : counts) EXPECT_EQ(v, 4) << k;
}

TEST(Emit, WritesIntoDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "qkinfer_emit_test";
  std::filesystem::remove_all(dir);
  const auto r = run_plan(plan_for({StrategyId::kAaoQae}, {0.1}, 2));
  const auto path = emit(r, EmitFormat::kCsv, dir);
  EXPECT_EQ(path.filename(), "results.csv");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), to_csv(r));
  EXPECT_EQ(emit(r, EmitFormat::kPlotdata, dir).filename(), "plotdata.csv");
  std::filesystem::remove_all(dir);
}

TEST(Emit, UnwritableDirectoryNamesThePath) {
  const auto r = run_plan(plan_for({StrategyId::kAaoQae}, {0.1}, 1));
  try {
    emit(r, EmitFormat::kCsv, "/proc/qkinfer_cannot_write");
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("qkinfer_cannot_write"), std::string::npos);
  }
}

TEST(Calibrate, MultiplierReachesTarget) {
  const PreparedInstance p(small_instance());
  const double m = calibrate_multiplier(StrategyId::kAaoSampling, p, 0.05, 1.0 / 3.0, 200, 0.9, 5);
  InferenceOptions o;
  o.calibration.multipliers[static_cast<std::size_t>(StrategyId::kAaoSampling)] = m;
  EXPECT_GE(coverage(StrategyId::kAaoSampling, p, o, 200, 5), 0.9);
}

}  // namespace
}  // namespace qkinfer
