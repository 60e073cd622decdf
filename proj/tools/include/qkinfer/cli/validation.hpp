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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qkinfer/calibration.hpp"

namespace qkinfer::cli {

inline constexpr int kNumCriteria = 12;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;
};

struct ValidationConfig {
  /// Directory holding the committed fixtures.
  std::filesystem::path data_dir;
  /// Scratch space for the determinism check.
  std::filesystem::path scratch_dir;
  std::uint64_t seed = 2026;
  Calibration calibration = default_calibration();
};

/// "fast" selects criteria 1-3, "full" all of them. Anything else throws
/// std::invalid_argument.
std::vector<int> criteria_for_level(const std::string& level);

std::string criterion_name(int id);
double criterion_time_limit(int id);

/// Runs one criterion. Exceeding the time limit counts as a failure.
CriterionResult run_criterion(int id, const ValidationConfig& config);

/// "[PASS] 6  precision contract ...  (12.3 s)  detail".
std::string format_result(const CriterionResult& result);

}  // namespace qkinfer::cli
