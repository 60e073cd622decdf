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
#include <cstdint>
#include <filesystem>
#include <string>

#include "qkinfer/strategy_id.hpp"

namespace qkinfer {

/// Budget constants, versioned in core/data/calibration.json and embedded at
/// build time.
struct Calibration {
  int format_version = 1;
  /// Per-strategy multiplier applied on top of the budget formulas.
  std::array<double, kNumStrategies> multipliers{1, 1, 1, 1, 1, 1, 1};
  std::uint64_t qae_shots_per_round = 64;
  double qae_min_ratio = 2.0;
  /// Upper bound constant: qae queries <= c_qae * log(1/delta) / epsilon.
  double c_qae = 400.0;
  std::uint64_t sample_average_inner_shots = 1;
  std::uint64_t sample_average_qae_inner_shots = 4;

  double multiplier(StrategyId id) const noexcept {
    return multipliers[static_cast<std::size_t>(id)];
  }
};

/// Parses a calibration document. Throws FormatError on malformed input.
Calibration parse_calibration(const std::string& json_text);
Calibration load_calibration(const std::filesystem::path& path);
std::string to_json(const Calibration& calibration);

/// The calibration embedded in the library.
const Calibration& default_calibration();

}  // namespace qkinfer
