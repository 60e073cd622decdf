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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qkinfer/rng.hpp"

namespace qkinfer {

using Complex = std::complex<double>;

/// Widest register the dense engine accepts (2^16 amplitudes).
inline constexpr std::size_t kMaxQubits = 16;

/// Modeled gate count of a multi-controlled X with m controls.
constexpr std::uint64_t mcx_cost(std::size_t controls) noexcept { return 2 * controls + 1; }

enum class GateKind { kRX, kRY, kRZ, kH, kX, kZ, kCZ, kCNOT, kMCX, kStatePrep };

std::string_view gate_kind_name(GateKind kind) noexcept;

/// A control wire. `polarity == false` conditions on |0>.
struct Control {
  std::size_t qubit = 0;
  bool polarity = true;

  friend bool operator==(const Control&, const Control&) = default;
};

/// One gate of a circuit.
///
/// Single-target kinds act on `targets[0]`; CZ, CNOT and MCX are stored as Z
/// or X on one target plus controls. kStatePrep is a Householder reflection
/// over the register `targets` (targets[0] is the least significant bit of
/// the register index) that maps |0> to the real unit vector it was built
/// from; it is its own inverse.
struct Gate {
  GateKind kind = GateKind::kX;
  std::vector<std::size_t> targets;
  std::vector<Control> controls;
  double angle = 0.0;
  std::shared_ptr<const std::vector<double>> reflector;

  static Gate rx(std::size_t q, double theta);
  static Gate ry(std::size_t q, double theta);
  static Gate rz(std::size_t q, double theta);
  static Gate h(std::size_t q);
  static Gate x(std::size_t q);
  static Gate z(std::size_t q);
  static Gate cz(std::size_t a, std::size_t b);
  static Gate cnot(std::size_t control, std::size_t target);
  static Gate mcx(std::vector<Control> controls, std::size_t target);
  /// Reflection mapping |0> of `reg` to `amplitudes` (real, unit norm).
  static Gate state_prep(std::vector<std::size_t> reg, std::span<const double> amplitudes);

  Gate inverse() const;
  /// Highest qubit index touched plus one.
  std::size_t span_width() const noexcept;
};

/// Ordered gate list over a fixed register width.
///
/// `abstract_cost` is the modeled gate count assigned by whoever built the
/// circuit. Nothing here recomputes it from the gate list.
class Circuit {
 public:
  explicit Circuit(std::size_t width, std::uint64_t abstract_cost = 0);

  /// Validates indices (in range, targets and controls disjoint).
  Circuit& add(Gate gate);

  std::size_t width() const noexcept { return width_; }
  std::uint64_t abstract_cost() const noexcept { return abstract_cost_; }
  std::span<const Gate> gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  Circuit& set_abstract_cost(std::uint64_t cost) noexcept {
    abstract_cost_ = cost;
    return *this;
  }

  /// Gates reversed and inverted; same abstract cost.
  Circuit inverse() const;
  /// This circuit followed by `next` (same width); costs add.
  Circuit then(const Circuit& next) const;
  /// Same gates on a wider register (qubit indices unchanged).
  Circuit widened(std::size_t width) const;

 private:
  std::size_t width_;
  std::uint64_t abstract_cost_;
  std::vector<Gate> gates_;
};

/// Adds `control_qubits` (with matching `polarity` bits) to every gate.
/// The result keeps the original abstract cost. Overlap with qubits the
/// circuit touches throws std::invalid_argument.
Circuit controlled(const Circuit& circuit, std::span<const std::size_t> control_qubits,
                   std::span<const bool> polarity);

/// Dense amplitude vector, little-endian: qubit q is bit q of the index.
class QuantumState {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit QuantumState(std::size_t num_qubits);
  /// Throws unless the length is a power of two within kMaxQubits and the
  /// vector has unit norm to 1e-10.
  static QuantumState from_amplitudes(std::vector<Complex> amplitudes);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm_squared() const noexcept;

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

void apply_in_place(const Circuit& circuit, QuantumState& state);
/// Throws std::invalid_argument when widths differ.
QuantumState apply(const Circuit& circuit, QuantumState state);

/// <a|b>.
Complex inner_product(const QuantumState& a, const QuantumState& b);

struct BitConstraint {
  std::size_t qubit = 0;
  bool value = false;
};

/// Conjunction of per-qubit constraints.
class ProjectorSpec {
 public:
  ProjectorSpec() = default;
  explicit ProjectorSpec(std::vector<BitConstraint> constraints);

  /// All of `qubits` equal to `value`.
  static ProjectorSpec all(std::span<const std::size_t> qubits, bool value);
  ProjectorSpec& require(std::size_t qubit, bool value);

  std::span<const BitConstraint> constraints() const noexcept { return constraints_; }
  std::uint64_t mask() const noexcept { return mask_; }
  std::uint64_t pattern() const noexcept { return pattern_; }
  bool matches(std::uint64_t basis_index) const noexcept {
    return (basis_index & mask_) == pattern_;
  }
  std::size_t max_qubit() const noexcept;

 private:
  std::vector<BitConstraint> constraints_;
  std::uint64_t mask_ = 0;
  std::uint64_t pattern_ = 0;
};

/// Probability mass of basis states matching `projector`.
double projector_probability(const QuantumState& state, const ProjectorSpec& projector);

/// Multiplies every matching amplitude by -1.
void phase_flip(QuantumState& state, const ProjectorSpec& projector);

/// Marginal distribution of `qubits`; outcome bit j corresponds to qubits[j].
std::vector<double> marginal_distribution(const QuantumState& state,
                                          std::span<const std::size_t> qubits);

/// One measurement of `qubits`, bit j of the result is the outcome of
/// qubits[j].
std::uint64_t measure_bits(const QuantumState& state, std::span<const std::size_t> qubits,
                           SeededStream& rng);

/// `shots` independent measurements of `qubits`.
std::vector<std::uint64_t> measure_bits(const QuantumState& state,
                                        std::span<const std::size_t> qubits, std::size_t shots,
                                        SeededStream& rng);

}  // namespace qkinfer
