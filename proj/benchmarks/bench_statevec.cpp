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

#include <benchmark/benchmark.h>

#include "qkinfer/rng.hpp"
#include "qkinfer/statevec.hpp"

namespace {

qkinfer::Circuit layered_circuit(std::size_t width, std::size_t layers) {
  qkinfer::Circuit c(width);
  qkinfer::SeededStream rng(1);
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q < width; ++q) c.add(qkinfer::Gate::ry(q, rng.uniform()));
    for (std::size_t q = 0; q + 1 < width; ++q) c.add(qkinfer::Gate::cz(q, q + 1));
  }
  return c;
}

void BM_ApplyLayeredCircuit(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  const auto c = layered_circuit(width, 4);
  for (auto _ : state) {
    qkinfer::QuantumState s(width);
    qkinfer::apply_in_place(c, s);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_ApplyLayeredCircuit)->DenseRange(4, 16, 4);

void BM_StatePrepReflection(benchmark::State& state) {
  const auto width = static_cast<std::size_t>(state.range(0));
  std::vector<double> amp(std::size_t{1} << width, 1.0 / std::sqrt(double(std::size_t{1} << width)));
  std::vector<std::size_t> reg(width);
  for (std::size_t q = 0; q < width; ++q) reg[q] = q;
  qkinfer::Circuit c(width);
  c.add(qkinfer::Gate::state_prep(reg, amp));
  for (auto _ : state) {
    qkinfer::QuantumState s(width);
    qkinfer::apply_in_place(c, s);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
}
BENCHMARK(BM_StatePrepReflection)->DenseRange(4, 12, 4);

}  // namespace

BENCHMARK_MAIN();
