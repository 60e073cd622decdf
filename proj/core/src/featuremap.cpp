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

#include "qkinfer/featuremap.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkinfer {

std::string_view family_name(FeatureFamily family) noexcept {
  switch (family) {
    case FeatureFamily::kAngleRyCz: return "angle_ry_cz";
    case FeatureFamily::kAngleRzRxRing: return "angle_rzrx_ring";
    case FeatureFamily::kIdentity: return "identity";
  }
  return "?";
}

std::optional<FeatureFamily> parse_family(std::string_view name) noexcept {
  if (name == "angle_ry_cz") return FeatureFamily::kAngleRyCz;
  if (name == "angle_rzrx_ring") return FeatureFamily::kAngleRzRxRing;
  if (name == "identity") return FeatureFamily::kIdentity;
  return std::nullopt;
}

std::uint64_t FeatureMapSpec::gate_count() const noexcept {
  switch (family) {
    case FeatureFamily::kAngleRyCz: return 2 * num_qubits * num_layers;
    case FeatureFamily::kAngleRzRxRing: return 3 * num_qubits * num_layers;
    case FeatureFamily::kIdentity: return 0;
  }
  return 0;
}

std::optional<std::size_t> FeatureMapSpec::data_dimension() const noexcept {
  if (family == FeatureFamily::kIdentity) return std::nullopt;
  return num_qubits;
}

void FeatureMapSpec::validate() const {
  if (num_qubits == 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("feature map needs between 1 and " + std::to_string(kMaxQubits) +
                                " qubits, got " + std::to_string(num_qubits));
  }
  if (!offsets.empty() && offsets.size() != num_layers) {
    throw std::invalid_argument("feature map has " + std::to_string(offsets.size()) +
                                " layer offsets for " + std::to_string(num_layers) + " layers");
  }
  for (double o : offsets) {
    if (!std::isfinite(o)) throw std::invalid_argument("feature map offset is not finite");
  }
}

TrainingSet::TrainingSet(std::vector<LabeledPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("training set is empty");
  const std::size_t d = points_.front().x.dimension();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.x.dimension() != d) {
      throw std::invalid_argument("training point " + std::to_string(i) + " has dimension " +
                                  std::to_string(p.x.dimension()) + ", expected " +
                                  std::to_string(d));
    }
    for (double v : p.x.coordinates) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("training point " + std::to_string(i) + " is not finite");
      }
    }
    if (!std::isfinite(p.label)) {
      throw std::invalid_argument("training label " + std::to_string(i) + " is not finite");
    }
  }
}

void check_point(const FeatureMapSpec& spec, const DataPoint& x) {
  if (auto d = spec.data_dimension(); d && x.dimension() != *d) {
    throw std::invalid_argument("data point has dimension " + std::to_string(x.dimension()) +
                                ", feature map expects " + std::to_string(*d));
  }
  for (double v : x.coordinates) {
    if (!std::isfinite(v)) throw std::invalid_argument("data point has a non-finite entry");
  }
}

Circuit build_U(const FeatureMapSpec& spec, const DataPoint& x) {
  spec.validate();
  check_point(spec, x);
  const std::size_t n = spec.num_qubits;
  Circuit c(n, spec.gate_count());
  if (spec.family == FeatureFamily::kIdentity) return c;

  for (std::size_t layer = 0; layer < spec.num_layers; ++layer) {
    const double shift = spec.offsets.empty() ? 0.0 : spec.offsets[layer];
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = x.coordinates[j % x.dimension()] + shift;
      if (spec.family == FeatureFamily::kAngleRyCz) {
        c.add(Gate::ry(j, angle));
      } else {
        c.add(Gate::rx(j, angle));
        c.add(Gate::rz(j, angle));
      }
    }
    if (n < 2) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t next = (j + 1) % n;
      if (spec.family == FeatureFamily::kAngleRyCz) {
        c.add(Gate::cz(j, next));
      } else {
        c.add(Gate::cnot(j, next));
      }
    }
  }
  return c;
}

QuantumState feature_state(const FeatureMapSpec& spec, const DataPoint& x) {
  return apply(build_U(spec, x), QuantumState(spec.num_qubits));
}

double kernel_exact(const FeatureMapSpec& spec, const DataPoint& x, const DataPoint& x2) {
  if (x.dimension() != x2.dimension()) {
    throw std::invalid_argument("kernel arguments have dimensions " +
                                std::to_string(x.dimension()) + " and " +
                                std::to_string(x2.dimension()));
  }
  const QuantumState a = feature_state(spec, x);
  const QuantumState b = feature_state(spec, x2);
  return std::norm(inner_product(b, a));
}

std::vector<double> kernel_row(const FeatureMapSpec& spec, const TrainingSet& training,
                               const DataPoint& x) {
  if (x.dimension() != training.dimension()) {
    throw std::invalid_argument("input has dimension " + std::to_string(x.dimension()) +
                                ", training set has " + std::to_string(training.dimension()));
  }
  const QuantumState psi = feature_state(spec, x);
  std::vector<double> row;
  row.reserve(training.size());
  for (const auto& p : training.points()) {
    row.push_back(std::norm(inner_product(feature_state(spec, p.x), psi)));
  }
  return row;
}

double f_exact(const FeatureMapSpec& spec, const CoefficientVector& alpha,
               const TrainingSet& training, const DataPoint& x) {
  if (alpha.size() != training.size()) {
    throw std::invalid_argument("coefficient vector has " + std::to_string(alpha.size()) +
                                " entries for " + std::to_string(training.size()) +
                                " training points");
  }
  const std::vector<double> row = kernel_row(spec, training, x);
  double f = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) f += alpha[i] * row[i];
  return f;
}

}  // namespace qkinfer
