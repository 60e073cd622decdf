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

#include <numbers>

#include <benchmark/benchmark.h>

#include "qkinfer/strategies.hpp"

namespace {

qkinfer::Instance make_instance(std::size_t n, std::size_t N) {
  qkinfer::SeededStream rng(7);
  qkinfer::FeatureMapSpec spec;
  spec.num_qubits = n;
  spec.num_layers = 2;
  auto point = [&] {
    qkinfer::DataPoint x;
    for (std::size_t j = 0; j < n; ++j) x.coordinates.push_back(std::numbers::pi * rng.uniform());
    return x;
  };
  std::vector<qkinfer::LabeledPoint> pts;
  std::vector<double> alpha;
  for (std::size_t i = 0; i < N; ++i) {
    pts.push_back({point(), 1.0});
    alpha.push_back(2.0 * rng.uniform() - 1.0);
  }
  return {spec, qkinfer::CoefficientVector(alpha), qkinfer::TrainingSet(pts), point()};
}

void BM_PrepareInstance(benchmark::State& state) {
  const auto inst = make_instance(3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qkinfer::PreparedInstance p(inst);
    benchmark::DoNotOptimize(p.exact());
  }
}
BENCHMARK(BM_PrepareInstance)->RangeMultiplier(2)->Range(2, 16);

void BM_Infer(benchmark::State& state) {
  const qkinfer::PreparedInstance p(make_instance(3, 8));
  const auto id = static_cast<qkinfer::StrategyId>(state.range(0));
  qkinfer::InferenceOptions o;
  o.epsilon = 0.02;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qkinfer::infer(id, p, o, seed++).estimate);
  state.SetLabel(std::string(qkinfer::strategy_name(id)));
}
BENCHMARK(BM_Infer)->DenseRange(0, qkinfer::kNumStrategies - 1);

}  // namespace
