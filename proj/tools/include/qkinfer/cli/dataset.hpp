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

#include "qkinfer/featuremap.hpp"
#include "qkinfer/strategies.hpp"

namespace qkinfer::cli {

/// A serialized instance: feature map, labeled training points, trained
/// weights and optional test inputs.
///
///   {"format_version": 1, "name": "...",
///    "feature_map": {"family": "angle_ry_cz", "num_qubits": 3,
///                    "num_layers": 2, "offsets": []},
///    "training_set": [{"x": [..], "y": 1}, ...],
///    "alpha": [..], "test_inputs": [[..], ...]}
struct DatasetFile {
  std::string name;
  FeatureMapSpec feature_map;
  std::vector<LabeledPoint> training;
  std::vector<double> alpha;
  std::vector<DataPoint> test_inputs;

  /// Throws FormatError when lengths or dimensions are inconsistent.
  void validate() const;
  /// Instance at input `x` (the first test input when omitted).
  Instance instance(const DataPoint& x) const;
  Instance instance() const;

  friend bool operator==(const DatasetFile&, const DatasetFile&);
};

inline constexpr int kDatasetFormatVersion = 1;

/// Throws FormatError on malformed or inconsistent input.
DatasetFile parse_dataset(const std::string& json_text);
DatasetFile load_dataset(const std::filesystem::path& path);
std::string dump_dataset(const DatasetFile& dataset);
void save_dataset(const DatasetFile& dataset, const std::filesystem::path& path);

struct GeneratorOptions {
  FeatureFamily family = FeatureFamily::kAngleRyCz;
  std::size_t num_qubits = 3;
  std::size_t num_layers = 2;
  std::size_t num_terms = 8;
  std::size_t num_test_inputs = 4;
  std::uint64_t seed = 1;
  /// Pareto magnitudes with random signs; uniform on [-1, 1] otherwise.
  bool heavy_tailed = true;
  std::string name;
};

/// Deterministic in the options. Features are uniform on [0, pi).
DatasetFile generate_dataset(const GeneratorOptions& options);

/// Parses "0.1,0.2,0.3". Throws FormatError.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace qkinfer::cli
