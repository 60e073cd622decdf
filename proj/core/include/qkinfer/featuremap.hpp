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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qkinfer/coefkit.hpp"
#include "qkinfer/statevec.hpp"

namespace qkinfer {

enum class FeatureFamily { kAngleRyCz, kAngleRzRxRing, kIdentity };

std::string_view family_name(FeatureFamily family) noexcept;
/// Accepts "angle_ry_cz", "angle_rzrx_ring", "identity".
std::optional<FeatureFamily> parse_family(std::string_view name) noexcept;

/// Shape of U(x).
///
/// angle_ry_cz: per layer, RY on every qubit then CZ(j, j+1 mod n) for each j.
/// angle_rzrx_ring: per layer, RX then RZ on every qubit then a CNOT ring.
/// identity: no gates; any data dimension.
/// Layer l adds `offsets[l]` (when present) to every rotation angle.
struct FeatureMapSpec {
  FeatureFamily family = FeatureFamily::kAngleRyCz;
  std::size_t num_qubits = 1;
  std::size_t num_layers = 1;
  std::vector<double> offsets;

  /// Charged cost of one U(x): 2nL, 3nL or 0.
  std::uint64_t gate_count() const noexcept;
  /// Data dimension the family expects, or nullopt when any is accepted.
  std::optional<std::size_t> data_dimension() const noexcept;
  /// Throws std::invalid_argument on a malformed feature map.
  void validate() const;
};

struct DataPoint {
  std::vector<double> coordinates;

  std::size_t dimension() const noexcept { return coordinates.size(); }
};

struct LabeledPoint {
  DataPoint x;
  double label = 0.0;
};

/// Nonempty list of labeled points sharing one dimension.
class TrainingSet {
 public:
  /// Throws std::invalid_argument when empty, ragged or non-finite.
  explicit TrainingSet(std::vector<LabeledPoint> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dimension() const noexcept { return points_.front().x.dimension(); }
  const LabeledPoint& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<LabeledPoint>& points() const noexcept { return points_; }

 private:
  std::vector<LabeledPoint> points_;
};

/// Throws std::invalid_argument on a dimension mismatch or a non-finite entry.
void check_point(const FeatureMapSpec& spec, const DataPoint& x);

/// U(x) on n qubits with abstract cost gate_count().
Circuit build_U(const FeatureMapSpec& spec, const DataPoint& x);

/// U(x)|0>.
QuantumState feature_state(const FeatureMapSpec& spec, const DataPoint& x);

/// |<psi(x2)|psi(x)>|^2 from exact statevectors.
double kernel_exact(const FeatureMapSpec& spec, const DataPoint& x, const DataPoint& x2);

/// k(x, x_i) for every training point.
std::vector<double> kernel_row(const FeatureMapSpec& spec, const TrainingSet& training,
                               const DataPoint& x);

/// sum_i alpha_i k(x, x_i).
double f_exact(const FeatureMapSpec& spec, const CoefficientVector& alpha,
               const TrainingSet& training, const DataPoint& x);

}  // namespace qkinfer
