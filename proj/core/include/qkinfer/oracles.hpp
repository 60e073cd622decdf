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
#include <vector>

#include "qkinfer/coefkit.hpp"
#include "qkinfer/featuremap.hpp"
#include "qkinfer/statevec.hpp"

namespace qkinfer {

/// Smallest m with 2^m >= count (0 for count <= 1).
std::size_t ceil_log2(std::size_t count) noexcept;

/// Qubit assignment for the composite circuits.
///
/// data occupies [0, n), idx occupies [n, n + m), then sign and flag. The
/// amplitude-encoding layout appends qp_trash and qp_pm after the flag.
struct RegisterLayout {
  std::size_t data_width = 0;
  std::size_t idx_width = 0;
  bool amplitude_qubits = false;

  /// Throws WidthOverflowError beyond kMaxQubits.
  static RegisterLayout all_at_once(std::size_t n, std::size_t num_terms);
  static RegisterLayout amplitude_encoding(std::size_t n, std::size_t num_terms);

  std::size_t width() const noexcept { return data_width + idx_width + (amplitude_qubits ? 4 : 2); }
  std::size_t data(std::size_t j) const noexcept { return j; }
  std::size_t idx(std::size_t j) const noexcept { return data_width + j; }
  std::size_t sign() const noexcept { return data_width + idx_width; }
  std::size_t flag() const noexcept { return sign() + 1; }
  std::size_t qp_trash() const noexcept { return sign() + 2; }
  std::size_t qp_pm() const noexcept { return sign() + 3; }
  std::vector<std::size_t> data_qubits() const;
  std::vector<std::size_t> idx_qubits() const;
};

/// Target state of W(alpha) on idx (low bits) and sign (top bit): amplitude
/// sqrt(p_i) at local index i | (b_i << m) with b_i = 1 for negative terms.
struct StatePrepSpec {
  std::size_t idx_width = 0;
  std::vector<double> amplitudes;
  std::uint64_t charged_cost = 0;

  /// The prep as a single gate on the given idx and sign qubits.
  Gate as_gate(std::span<const std::size_t> idx_qubits, std::size_t sign_qubit) const;
};

StatePrepSpec build_W(const CoefDecomposition& decomp);

/// N * (G + 2 * mcx_cost(ceil(log2 N))).
std::uint64_t o_dagger_cost(std::uint64_t gates_per_u, std::size_t num_terms) noexcept;

/// Index-selected product of U^dagger(x_i) on data, one flag-controlled
/// block per training point. The flag is restored to |0>.
Circuit build_O_dagger(const FeatureMapSpec& spec, const TrainingSet& training,
                       const RegisterLayout& layout);

/// Single-shot readout of the all-at-once circuit.
struct MeasurementSpec {
  double l1_norm = 0.0;
  ProjectorSpec data_zero;
  std::size_t sign_qubit = 0;

  /// l1 * [data = 0] * (+1 or -1 from the sign bit).
  double outcome(std::uint64_t basis_index) const noexcept;
  double expectation(const QuantumState& state) const;
};

struct AllAtOnceCircuit {
  RegisterLayout layout;
  Circuit circuit;
  MeasurementSpec measurement;
};

/// U(x), then W(alpha), then O^dagger(S).
AllAtOnceCircuit build_all_at_once(const FeatureMapSpec& spec, const DataPoint& x,
                                   const CoefficientVector& alpha, const TrainingSet& training);

struct AmplitudeEncodingCircuit {
  RegisterLayout layout;
  Circuit circuit;
  ProjectorSpec good_plus;   // qp_trash = 0, qp_pm = 0
  ProjectorSpec good_minus;  // qp_trash = 0, qp_pm = 1
};

/// The all-at-once circuit followed by the data-zero test onto qp_trash and
/// a sign copy onto qp_pm.
AmplitudeEncodingCircuit build_V(const FeatureMapSpec& spec, const DataPoint& x,
                                 const CoefficientVector& alpha, const TrainingSet& training);

/// A = U^dagger(x2) U(x) on n qubits with cost 2G; P(data = 0) = k(x, x2).
Circuit build_kernel_circuit(const FeatureMapSpec& spec, const DataPoint& x,
                             const DataPoint& x2);

struct ChargedCosts {
  std::uint64_t u_x = 0;
  std::uint64_t w_alpha = 0;
  std::uint64_t o_dagger = 0;
};

struct OracleBundle {
  RegisterLayout layout;
  Circuit u_x;
  StatePrepSpec w_alpha;
  Circuit o_dagger_s;
  std::optional<Circuit> v;
  ChargedCosts charged_costs;
};

OracleBundle build_oracle_bundle(const FeatureMapSpec& spec, const DataPoint& x,
                                 const CoefficientVector& alpha, const TrainingSet& training,
                                 bool with_v);

}  // namespace qkinfer
