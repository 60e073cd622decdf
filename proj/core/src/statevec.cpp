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

#include "qkinfer/statevec.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qkinfer/errors.hpp"

namespace qkinfer {

namespace {

using Matrix2 = std::array<Complex, 4>;  // row-major

Matrix2 single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex i(0.0, 1.0);
  switch (kind) {
    case GateKind::kRX:
      return {c, -i * s, -i * s, c};
    case GateKind::kRY:
      return {c, -s, s, c};
    case GateKind::kRZ:
      return {std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0))};
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      return {r, r, r, -r};
    }
    default:
      throw std::logic_error("single_qubit_matrix: not a dense single-qubit kind");
  }
}

struct ControlMask {
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
};

ControlMask control_mask(std::span<const Control> controls) {
  ControlMask m;
  for (const Control& c : controls) {
    m.mask |= std::uint64_t{1} << c.qubit;
    if (c.polarity) m.value |= std::uint64_t{1} << c.qubit;
  }
  return m;
}

void apply_matrix(std::span<Complex> amp, std::size_t target, const ControlMask& cm,
                  const Matrix2& u) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::size_t dim = amp.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & tbit) || (i & cm.mask) != cm.value) continue;
    const Complex a0 = amp[i];
    const Complex a1 = amp[i | tbit];
    amp[i] = u[0] * a0 + u[1] * a1;
    amp[i | tbit] = u[2] * a0 + u[3] * a1;
  }
}

void apply_x(std::span<Complex> amp, std::size_t target, const ControlMask& cm) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if ((i & tbit) || (i & cm.mask) != cm.value) continue;
    std::swap(amp[i], amp[i | tbit]);
  }
}

void apply_phase(std::span<Complex> amp, std::size_t target, const ControlMask& cm,
                 Complex phase0, Complex phase1) {
  const std::uint64_t tbit = std::uint64_t{1} << target;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if ((i & cm.mask) != cm.value) continue;
    amp[i] *= (i & tbit) ? phase1 : phase0;
  }
}

void apply_reflection(std::span<Complex> amp, std::span<const std::size_t> reg,
                      const ControlMask& cm, const std::vector<double>& u) {
  const std::size_t local_dim = u.size();
  std::vector<std::uint64_t> offsets(local_dim, 0);
  std::uint64_t reg_mask = 0;
  for (std::size_t j = 0; j < local_dim; ++j) {
    for (std::size_t b = 0; b < reg.size(); ++b) {
      if (j & (std::size_t{1} << b)) offsets[j] |= std::uint64_t{1} << reg[b];
    }
  }
  for (std::size_t q : reg) reg_mask |= std::uint64_t{1} << q;

  std::vector<Complex> block(local_dim);
  for (std::size_t base = 0; base < amp.size(); ++base) {
    if ((base & reg_mask) || (base & cm.mask) != cm.value) continue;
    Complex overlap = 0.0;
    for (std::size_t j = 0; j < local_dim; ++j) {
      block[j] = amp[base | offsets[j]];
      overlap += u[j] * block[j];
    }
    overlap *= 2.0;
    for (std::size_t j = 0; j < local_dim; ++j) {
      amp[base | offsets[j]] = block[j] - u[j] * overlap;
    }
  }
}

void check_width(std::size_t width) {
  if (width > kMaxQubits) {
    throw WidthOverflowError("register of " + std::to_string(width) +
                             " qubits exceeds the simulator limit of " +
                             std::to_string(kMaxQubits));
  }
}

}  // namespace

std::string_view gate_kind_name(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::kRX: return "RX";
    case GateKind::kRY: return "RY";
    case GateKind::kRZ: return "RZ";
    case GateKind::kH: return "H";
    case GateKind::kX: return "X";
    case GateKind::kZ: return "Z";
    case GateKind::kCZ: return "CZ";
    case GateKind::kCNOT: return "CNOT";
    case GateKind::kMCX: return "MCX";
    case GateKind::kStatePrep: return "STATEPREP";
  }
  return "?";
}

Gate Gate::rx(std::size_t q, double theta) { return {GateKind::kRX, {q}, {}, theta, nullptr}; }
Gate Gate::ry(std::size_t q, double theta) { return {GateKind::kRY, {q}, {}, theta, nullptr}; }
Gate Gate::rz(std::size_t q, double theta) { return {GateKind::kRZ, {q}, {}, theta, nullptr}; }
Gate Gate::h(std::size_t q) { return {GateKind::kH, {q}, {}, 0.0, nullptr}; }
Gate Gate::x(std::size_t q) { return {GateKind::kX, {q}, {}, 0.0, nullptr}; }
Gate Gate::z(std::size_t q) { return {GateKind::kZ, {q}, {}, 0.0, nullptr}; }
Gate Gate::cz(std::size_t a, std::size_t b) {
  return {GateKind::kCZ, {b}, {Control{a, true}}, 0.0, nullptr};
}
Gate Gate::cnot(std::size_t control, std::size_t target) {
  return {GateKind::kCNOT, {target}, {Control{control, true}}, 0.0, nullptr};
}
Gate Gate::mcx(std::vector<Control> controls, std::size_t target) {
  return {GateKind::kMCX, {target}, std::move(controls), 0.0, nullptr};
}

Gate Gate::state_prep(std::vector<std::size_t> reg, std::span<const double> amplitudes) {
  if (reg.empty() || amplitudes.size() != (std::size_t{1} << reg.size())) {
    throw std::invalid_argument("state_prep: amplitude count must be 2^(register width)");
  }
  double norm2 = 0.0;
  for (double a : amplitudes) norm2 += a * a;
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw std::invalid_argument("state_prep: target amplitudes are not normalized");
  }
  // u = (e0 - w) / |e0 - w| so that (I - 2 u u^T) e0 = w.
  std::vector<double> u(amplitudes.begin(), amplitudes.end());
  for (double& v : u) v = -v;
  u[0] += 1.0;
  double un2 = 0.0;
  for (double v : u) un2 += v * v;
  if (un2 < 1e-28) {
    std::fill(u.begin(), u.end(), 0.0);
  } else {
    const double inv = 1.0 / std::sqrt(un2);
    for (double& v : u) v *= inv;
  }
  return {GateKind::kStatePrep, std::move(reg), {}, 0.0,
          std::make_shared<const std::vector<double>>(std::move(u))};
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::kRX:
    case GateKind::kRY:
    case GateKind::kRZ:
      g.angle = -angle;
      break;
    default:
      break;
  }
  return g;
}

std::size_t Gate::span_width() const noexcept {
  std::size_t w = 0;
  for (std::size_t t : targets) w = std::max(w, t + 1);
  for (const Control& c : controls) w = std::max(w, c.qubit + 1);
  return w;
}

Circuit::Circuit(std::size_t width, std::uint64_t abstract_cost)
    : width_(width), abstract_cost_(abstract_cost) {
  check_width(width);
}

Circuit& Circuit::add(Gate gate) {
  if (gate.targets.empty()) throw std::invalid_argument("gate without targets");
  if (gate.span_width() > width_) {
    throw std::invalid_argument(std::string(gate_kind_name(gate.kind)) +
                                " gate touches a qubit outside a register of width " +
                                std::to_string(width_));
  }
  std::uint64_t seen = 0;
  auto claim = [&](std::size_t q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    if (seen & bit) {
      throw std::invalid_argument(std::string(gate_kind_name(gate.kind)) +
                                  " gate uses qubit " + std::to_string(q) + " twice");
    }
    seen |= bit;
  };
  for (std::size_t t : gate.targets) claim(t);
  for (const Control& c : gate.controls) claim(c.qubit);
  if (gate.kind == GateKind::kStatePrep) {
    if (!gate.reflector || gate.reflector->size() != (std::size_t{1} << gate.targets.size())) {
      throw std::invalid_argument("state-prep gate has an inconsistent reflector");
    }
  } else if (gate.targets.size() != 1) {
    throw std::invalid_argument("only state-prep gates may have several targets");
  }
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit out(width_, abstract_cost_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->inverse());
  return out;
}

Circuit Circuit::then(const Circuit& next) const {
  if (next.width_ != width_) {
    throw std::invalid_argument("cannot concatenate circuits of widths " +
                                std::to_string(width_) + " and " + std::to_string(next.width_));
  }
  Circuit out = *this;
  out.abstract_cost_ += next.abstract_cost_;
  out.gates_.insert(out.gates_.end(), next.gates_.begin(), next.gates_.end());
  return out;
}

Circuit Circuit::widened(std::size_t width) const {
  if (width < width_) throw std::invalid_argument("widened: cannot shrink a circuit");
  Circuit out(width, abstract_cost_);
  out.gates_ = gates_;
  return out;
}

Circuit controlled(const Circuit& circuit, std::span<const std::size_t> control_qubits,
                   std::span<const bool> polarity) {
  if (control_qubits.size() != polarity.size()) {
    throw std::invalid_argument("controlled: one polarity bit per control qubit required");
  }
  std::uint64_t used = 0;
  for (const Gate& g : circuit.gates()) {
    for (std::size_t t : g.targets) used |= std::uint64_t{1} << t;
    for (const Control& c : g.controls) used |= std::uint64_t{1} << c.qubit;
  }
  std::uint64_t ctrl = 0;
  for (std::size_t q : control_qubits) {
    if (q >= circuit.width()) {
      throw std::invalid_argument("controlled: control qubit " + std::to_string(q) +
                                  " outside the register");
    }
    const std::uint64_t bit = std::uint64_t{1} << q;
    if ((used | ctrl) & bit) {
      throw std::invalid_argument("controlled: control qubit " + std::to_string(q) +
                                  " overlaps the controlled circuit");
    }
    ctrl |= bit;
  }
  Circuit out(circuit.width(), circuit.abstract_cost());
  for (const Gate& g : circuit.gates()) {
    Gate cg = g;
    for (std::size_t j = 0; j < control_qubits.size(); ++j) {
      cg.controls.push_back(Control{control_qubits[j], polarity[j]});
    }
    if (cg.kind == GateKind::kX || cg.kind == GateKind::kCNOT) cg.kind = GateKind::kMCX;
    out.add(std::move(cg));
  }
  return out;
}

QuantumState::QuantumState(std::size_t num_qubits) : num_qubits_(num_qubits) {
  check_width(num_qubits);
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex(0.0, 0.0));
  amplitudes_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw std::invalid_argument("state length must be a power of two");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(dim));
  QuantumState s(n);
  double norm2 = 0.0;
  for (const Complex& a : amplitudes) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > 1e-10) throw std::invalid_argument("state is not normalized");
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

double QuantumState::norm_squared() const noexcept {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return s;
}

void apply_in_place(const Circuit& circuit, QuantumState& state) {
  if (circuit.width() != state.num_qubits()) {
    throw std::invalid_argument("circuit width " + std::to_string(circuit.width()) +
                                " does not match state width " +
                                std::to_string(state.num_qubits()));
  }
  std::span<Complex> amp = state.amplitudes();
  for (const Gate& g : circuit.gates()) {
    const ControlMask cm = control_mask(g.controls);
    switch (g.kind) {
      case GateKind::kX:
      case GateKind::kCNOT:
      case GateKind::kMCX:
        apply_x(amp, g.targets[0], cm);
        break;
      case GateKind::kZ:
      case GateKind::kCZ:
        apply_phase(amp, g.targets[0], cm, 1.0, -1.0);
        break;
      case GateKind::kRZ: {
        const Complex i(0.0, 1.0);
        apply_phase(amp, g.targets[0], cm, std::exp(-i * (g.angle / 2.0)),
                    std::exp(i * (g.angle / 2.0)));
        break;
      }
      case GateKind::kRX:
      case GateKind::kRY:
      case GateKind::kH:
        apply_matrix(amp, g.targets[0], cm, single_qubit_matrix(g.kind, g.angle));
        break;
      case GateKind::kStatePrep:
        apply_reflection(amp, g.targets, cm, *g.reflector);
        break;
    }
  }
}

QuantumState apply(const Circuit& circuit, QuantumState state) {
  apply_in_place(circuit, state);
  return state;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("inner_product: width mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ProjectorSpec::ProjectorSpec(std::vector<BitConstraint> constraints) {
  for (const BitConstraint& c : constraints) require(c.qubit, c.value);
}

ProjectorSpec ProjectorSpec::all(std::span<const std::size_t> qubits, bool value) {
  ProjectorSpec p;
  for (std::size_t q : qubits) p.require(q, value);
  return p;
}

ProjectorSpec& ProjectorSpec::require(std::size_t qubit, bool value) {
  if (qubit >= 64) throw std::invalid_argument("projector qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  if ((mask_ & bit) && (((pattern_ & bit) != 0) != value)) {
    throw std::invalid_argument("projector has contradictory constraints on qubit " +
                                std::to_string(qubit));
  }
  if (!(mask_ & bit)) constraints_.push_back({qubit, value});
  mask_ |= bit;
  if (value) pattern_ |= bit;
  return *this;
}

std::size_t ProjectorSpec::max_qubit() const noexcept {
  std::size_t m = 0;
  for (const BitConstraint& c : constraints_) m = std::max(m, c.qubit);
  return m;
}

namespace {
void check_projector(const QuantumState& state, const ProjectorSpec& projector) {
  if (!projector.constraints().empty() && projector.max_qubit() >= state.num_qubits()) {
    throw std::out_of_range("projector constrains qubit " +
                            std::to_string(projector.max_qubit()) + " of a " +
                            std::to_string(state.num_qubits()) + "-qubit state");
  }
}

void check_qubits(const QuantumState& state, std::span<const std::size_t> qubits) {
  for (std::size_t q : qubits) {
    if (q >= state.num_qubits()) {
      throw std::out_of_range("qubit " + std::to_string(q) + " outside a " +
                              std::to_string(state.num_qubits()) + "-qubit state");
    }
  }
}
}  // namespace

double projector_probability(const QuantumState& state, const ProjectorSpec& projector) {
  check_projector(state, projector);
  double p = 0.0;
  const auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (projector.matches(i)) p += std::norm(amp[i]);
  }
  return p;
}

void phase_flip(QuantumState& state, const ProjectorSpec& projector) {
  check_projector(state, projector);
  auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (projector.matches(i)) amp[i] = -amp[i];
  }
}

std::vector<double> marginal_distribution(const QuantumState& state,
                                          std::span<const std::size_t> qubits) {
  check_qubits(state, qubits);
  if (qubits.size() > 20) throw std::invalid_argument("too many measured qubits");
  std::vector<double> dist(std::size_t{1} << qubits.size(), 0.0);
  const auto amp = state.amplitudes();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    std::size_t outcome = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if (i & (std::size_t{1} << qubits[j])) outcome |= std::size_t{1} << j;
    }
    dist[outcome] += std::norm(amp[i]);
  }
  return dist;
}

namespace {
std::uint64_t draw(const std::vector<double>& cumulative, SeededStream& rng) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<std::uint64_t>(it - cumulative.begin());
  return std::min<std::uint64_t>(idx, cumulative.size() - 1);
}
}  // namespace

std::uint64_t measure_bits(const QuantumState& state, std::span<const std::size_t> qubits,
                           SeededStream& rng) {
  return measure_bits(state, qubits, 1, rng).front();
}

std::vector<std::uint64_t> measure_bits(const QuantumState& state,
                                        std::span<const std::size_t> qubits, std::size_t shots,
                                        SeededStream& rng) {
  std::vector<double> cumulative = marginal_distribution(state, qubits);
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
  std::vector<std::uint64_t> out(shots);
  for (auto& o : out) o = draw(cumulative, rng);
  return out;
}

}  // namespace qkinfer
