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
#include <optional>
#include <string_view>

namespace qkinfer {

enum class StrategyId : std::size_t {
  kLsFixedSampling = 0,
  kLsAdaptiveSampling,
  kLsFixedQae,
  kLsAdaptiveQae,
  kAaoSampling,
  kAaoQae,
  kSampleAverage,
};

inline constexpr std::size_t kNumStrategies = 7;

inline constexpr std::array<StrategyId, kNumStrategies> kAllStrategies = {
    StrategyId::kLsFixedSampling, StrategyId::kLsAdaptiveSampling, StrategyId::kLsFixedQae,
    StrategyId::kLsAdaptiveQae,   StrategyId::kAaoSampling,        StrategyId::kAaoQae,
    StrategyId::kSampleAverage,
};

/// Lowercase-hyphen name, e.g. "all-at-once-qae". Used on the command line
/// and in CSV output.
std::string_view strategy_name(StrategyId id) noexcept;
/// Enum-style name, e.g. "AAO_QAE".
std::string_view strategy_enum_name(StrategyId id) noexcept;
/// Accepts either spelling.
std::optional<StrategyId> parse_strategy(std::string_view name) noexcept;

constexpr bool is_list_and_sum(StrategyId id) noexcept {
  return id == StrategyId::kLsFixedSampling || id == StrategyId::kLsAdaptiveSampling ||
         id == StrategyId::kLsFixedQae || id == StrategyId::kLsAdaptiveQae;
}
constexpr bool is_adaptive(StrategyId id) noexcept {
  return id == StrategyId::kLsAdaptiveSampling || id == StrategyId::kLsAdaptiveQae;
}
constexpr bool uses_qae(StrategyId id) noexcept {
  return id == StrategyId::kLsFixedQae || id == StrategyId::kLsAdaptiveQae ||
         id == StrategyId::kAaoQae;
}

}  // namespace qkinfer
