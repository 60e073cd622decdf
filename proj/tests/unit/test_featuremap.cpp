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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "qkinfer/featuremap.hpp"
#include "reference_sim.hpp"

namespace qkinfer {
namespace {

FeatureMapSpec ry_cz(std::size_t n, std::size_t layers) {
  FeatureMapSpec s;
  s.family = FeatureFamily::kAngleRyCz;
  s.num_qubits = n;
  s.num_layers = layers;
  return s;
}

DataPoint random_point(SeededStream& rng, std::size_t d) {
  DataPoint x;
  for (std::size_t j = 0; j < d; ++j) x.coordinates.push_back(std::numbers::pi * rng.uniform());
  return x;
}

TEST(BuildU, IdentityFamilyIsEmpty) {
  FeatureMapSpec s;
  s.family = FeatureFamily::kIdentity;
  s.num_qubits = 2;
  const Circuit u = build_U(s, DataPoint{{0.3, 0.1, 7.0}});
  EXPECT_EQ(u.size(), 0u);
  EXPECT_EQ(u.abstract_cost(), 0u);
}

TEST(BuildU, SingleQubitSingleRotation) {
  const Circuit u = build_U(ry_cz(1, 1), DataPoint{{0.8}});
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u.gates()[0].kind, GateKind::kRY);
  EXPECT_EQ(u.abstract_cost(), 2u);
}

TEST(BuildU, GateCountFormula) {
  EXPECT_EQ(ry_cz(3, 2).gate_count(), 12u);
  FeatureMapSpec ring = ry_cz(3, 2);
  ring.family = FeatureFamily::kAngleRzRxRing;
  EXPECT_EQ(ring.gate_count(), 18u);
}

TEST(BuildU, RejectsDimensionMismatch) {
  EXPECT_THROW(build_U(ry_cz(2, 1), DataPoint{{0.1}}), std::invalid_argument);
  EXPECT_THROW(build_U(ry_cz(2, 1), DataPoint{{0.1, NAN}}), std::invalid_argument);
}

TEST(ParseFamily, RoundTrip) {
  for (auto f : {FeatureFamily::kAngleRyCz, FeatureFamily::kAngleRzRxRing, FeatureFamily::kIdentity}) {
    EXPECT_EQ(parse_family(family_name(f)), f);
  }
  EXPECT_FALSE(parse_family("zz").has_value());
}

TEST(Kernel, SelfOverlapIsOne) {
  SeededStream rng(1);
  const auto x = random_point(rng, 3);
  EXPECT_NEAR(kernel_exact(ry_cz(3, 2), x, x), 1.0, 1e-14);
}

TEST(Kernel, SingleRotationClosedForm) {
  // <0|RY(-b) RY(a)|0> = cos((a - b) / 2).
  const double a = 1.3, b = 0.4;
  EXPECT_NEAR(kernel_exact(ry_cz(1, 1), DataPoint{{a}}, DataPoint{{b}}),
              std::pow(std::cos((a - b) / 2), 2), 1e-14);
}

TEST(Kernel, IdentityFamilyIsOne) {
  FeatureMapSpec s;
  s.family = FeatureFamily::kIdentity;
  s.num_qubits = 2;
  EXPECT_DOUBLE_EQ(kernel_exact(s, DataPoint{{0.1, 0.2}}, DataPoint{{2.0, -1.0}}), 1.0);
}

TEST(FExact, SingleTermAtItsOwnPoint) {
  const TrainingSet ts({{DataPoint{{0.7, 0.2}}, 1.0}});
  EXPECT_NEAR(f_exact(ry_cz(2, 2), CoefficientVector({1.0}), ts, DataPoint{{0.7, 0.2}}), 1.0, 1e-14);
}

TEST(FExact, Linearity) {
  const TrainingSet ts({{DataPoint{{0.7, 0.2}}, 1.0}});
  const DataPoint x{{1.9, 0.5}};
  const double k = kernel_exact(ry_cz(2, 2), x, ts[0].x);
  EXPECT_NEAR(f_exact(ry_cz(2, 2), CoefficientVector({-2.5}), ts, x), -2.5 * k, 1e-14);
}

TEST(FeaturemapProperty, KernelInUnitInterval) {
  SeededStream rng(301);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 4;
    auto spec = ry_cz(n, 1 + rng() % 3);
    if (rng() % 2) spec.family = FeatureFamily::kAngleRzRxRing;
    const double k = kernel_exact(spec, random_point(rng, n), random_point(rng, n));
    ASSERT_GE(k, 0.0);
    ASSERT_LE(k, 1.0 + 1e-12);
  }
}

TEST(FeaturemapProperty, SignedSplitReproducesFExact) {
  SeededStream rng(302);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t N = 1 + rng() % 8;
    const auto spec = ry_cz(n, 1 + rng() % 2);
    std::vector<LabeledPoint> pts;
    std::vector<double> alpha;
    for (std::size_t i = 0; i < N; ++i) {
      pts.push_back({random_point(rng, n), 1.0});
      alpha.push_back(2.0 * rng.uniform() - 1.0);
    }
    const TrainingSet ts(pts);
    const DataPoint x = random_point(rng, n);
    const CoefficientVector a(alpha);
    const auto d = decompose(a);
    const auto parts = f_plus_minus_exact(d, kernel_row(spec, ts, x));
    ASSERT_NEAR(d.l1_norm * (parts.f_plus - parts.f_minus), f_exact(spec, a, ts, x), 1e-10);
  }
}

TEST(FeaturemapProperty, ReportedCostMatchesGateList) {
  // Rotations and entanglers each cost one gate.
  SeededStream rng(303);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 3;
    auto spec = ry_cz(n, 1 + rng() % 3);
    if (rng() % 2) spec.family = FeatureFamily::kAngleRzRxRing;
    const Circuit u = build_U(spec, random_point(rng, n));
    ASSERT_EQ(u.abstract_cost(), static_cast<std::uint64_t>(u.size()));
  }
}

TEST(FeaturemapProperty, StateMatchesDenseReference) {
  SeededStream rng(304);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 3;
    auto spec = ry_cz(n, 1 + rng() % 2);
    if (rng() % 2) spec.family = FeatureFamily::kAngleRzRxRing;
    const DataPoint x = random_point(rng, n);
    const auto s = feature_state(spec, x);
    const auto ref = testing::matvec(testing::circuit_matrix(build_U(spec, x)), testing::basis(0, n));
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(std::abs(s[i] - ref[i]), 0.0, 1e-12);
  }
}

}  // namespace
}  // namespace qkinfer
