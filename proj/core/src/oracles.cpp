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

#include "qkinfer/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkinfer/errors.hpp"

namespace qkinfer {

std::size_t ceil_log2(std::size_t count) noexcept {
  std::size_t m = 0;
  while ((std::size_t{1} << m) < count) ++m;
  return m;
}

namespace {
RegisterLayout make_layout(std::size_t n, std::size_t num_terms, bool amplitude) {
  if (num_terms == 0) throw std::invalid_argument("register layout needs at least one term");
  RegisterLayout l{n, ceil_log2(num_terms), amplitude};
  if (l.width() > kMaxQubits) {
    throw WidthOverflowError("instance needs " + std::to_string(l.width()) +
                             " qubits (n=" + std::to_string(n) + ", N=" +
                             std::to_string(num_terms) + "), limit is " +
                             std::to_string(kMaxQubits));
  }
  return l;
}
}  // namespace

RegisterLayout RegisterLayout::all_at_once(std::size_t n, std::size_t num_terms) {
  return make_layout(n, num_terms, false);
}

RegisterLayout RegisterLayout::amplitude_encoding(std::size_t n, std::size_t num_terms) {
  return make_layout(n, num_terms, true);
}

std::vector<std::size_t> RegisterLayout::data_qubits() const {
  std::vector<std::size_t> q(data_width);
  for (std::size_t j = 0; j < data_width; ++j) q[j] = data(j);
  return q;
}

std::vector<std::size_t> RegisterLayout::idx_qubits() const {
  std::vector<std::size_t> q(idx_width);
  for (std::size_t j = 0; j < idx_width; ++j) q[j] = idx(j);
  return q;
}

Gate StatePrepSpec::as_gate(std::span<const std::size_t> idx_qubits,
                            std::size_t sign_qubit) const {
  if (idx_qubits.size() != idx_width) {
    throw std::invalid_argument("state prep expects " + std::to_string(idx_width) +
                                " index qubits");
  }
  std::vector<std::size_t> reg(idx_qubits.begin(), idx_qubits.end());
  reg.push_back(sign_qubit);
  return Gate::state_prep(std::move(reg), amplitudes);
}

StatePrepSpec build_W(const CoefDecomposition& decomp) {
  if (decomp.size() == 0 || !(decomp.l1_norm > 0.0)) {
    throw std::invalid_argument("zero coefficient vector");
  }
  StatePrepSpec w;
  w.idx_width = ceil_log2(decomp.size());
  w.amplitudes.assign(std::size_t{2} << w.idx_width, 0.0);
  for (std::size_t i = 0; i < decomp.size(); ++i) {
    const std::size_t sign_bit = decomp.signs[i] < 0 ? 1 : 0;
    w.amplitudes[i | (sign_bit << w.idx_width)] = std::sqrt(decomp.probs[i]);
  }
  // Renormalize away round-off in sum(p) so the reflector is exact.
  double norm2 = 0.0;
  for (double a : w.amplitudes) norm2 += a * a;
  for (double& a : w.amplitudes) a /= std::sqrt(norm2);
  w.charged_cost = decomp.size();
  return w;
}

std::uint64_t o_dagger_cost(std::uint64_t gates_per_u, std::size_t num_terms) noexcept {
  return num_terms * (gates_per_u + 2 * mcx_cost(ceil_log2(num_terms)));
}

Circuit build_O_dagger(const FeatureMapSpec& spec, const TrainingSet& training,
                       const RegisterLayout& layout) {
  const std::size_t N = training.size();
  if (layout.data_width != spec.num_qubits || layout.idx_width != ceil_log2(N)) {
    throw std::invalid_argument("register layout does not match the instance");
  }
  Circuit out(layout.width(), o_dagger_cost(spec.gate_count(), N));
  const std::size_t flag = layout.flag();
  const std::size_t controls[] = {flag};
  const bool on[] = {true};
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<Control> select;
    for (std::size_t b = 0; b < layout.idx_width; ++b) {
      select.push_back(Control{layout.idx(b), ((i >> b) & 1U) != 0});
    }
    const Gate mark = Gate::mcx(select, flag);
    out.add(mark);
    const Circuit u_dag = build_U(spec, training[i].x).inverse().widened(layout.width());
    const Circuit block = controlled(u_dag, controls, on);
    for (const Gate& g : block.gates()) out.add(g);
    out.add(mark);
  }
  return out;
}

double MeasurementSpec::outcome(std::uint64_t basis_index) const noexcept {
  if (!data_zero.matches(basis_index)) return 0.0;
  return ((basis_index >> sign_qubit) & 1U) ? -l1_norm : l1_norm;
}

double MeasurementSpec::expectation(const QuantumState& state) const {
  ProjectorSpec plus = data_zero;
  plus.require(sign_qubit, false);
  ProjectorSpec minus = data_zero;
  minus.require(sign_qubit, true);
  return l1_norm * (projector_probability(state, plus) - projector_probability(state, minus));
}

namespace {
void check_instance(const FeatureMapSpec& spec, const DataPoint& x,
                    const CoefficientVector& alpha, const TrainingSet& training) {
  spec.validate();
  check_point(spec, x);
  if (alpha.size() != training.size()) {
    throw std::invalid_argument("coefficient vector has " + std::to_string(alpha.size()) +
                                " entries for " + std::to_string(training.size()) +
                                " training points");
  }
  if (x.dimension() != training.dimension()) {
    throw std::invalid_argument("input dimension differs from the training set");
  }
}

Circuit all_at_once_on(const FeatureMapSpec& spec, const DataPoint& x,
                       const CoefDecomposition& decomp, const TrainingSet& training,
                       const RegisterLayout& layout) {
  const Circuit u = build_U(spec, x).widened(layout.width());
  const StatePrepSpec w = build_W(decomp);
  Circuit prep(layout.width(), w.charged_cost);
  prep.add(w.as_gate(layout.idx_qubits(), layout.sign()));
  return u.then(prep).then(build_O_dagger(spec, training, layout));
}
}  // namespace

AllAtOnceCircuit build_all_at_once(const FeatureMapSpec& spec, const DataPoint& x,
                                   const CoefficientVector& alpha, const TrainingSet& training) {
  check_instance(spec, x, alpha, training);
  const RegisterLayout layout = RegisterLayout::all_at_once(spec.num_qubits, training.size());
  const CoefDecomposition decomp = decompose(alpha);
  MeasurementSpec m{decomp.l1_norm, ProjectorSpec::all(layout.data_qubits(), false),
                    layout.sign()};
  return {layout, all_at_once_on(spec, x, decomp, training, layout), std::move(m)};
}

AmplitudeEncodingCircuit build_V(const FeatureMapSpec& spec, const DataPoint& x,
                                 const CoefficientVector& alpha, const TrainingSet& training) {
  check_instance(spec, x, alpha, training);
  const RegisterLayout layout =
      RegisterLayout::amplitude_encoding(spec.num_qubits, training.size());
  const std::size_t n = spec.num_qubits;
  Circuit tail(layout.width(), mcx_cost(n) + 2);
  std::vector<Control> data_controls;
  for (std::size_t j = 0; j < n; ++j) {
    tail.add(Gate::x(layout.data(j)));
    data_controls.push_back(Control{layout.data(j), true});
  }
  tail.add(Gate::mcx(data_controls, layout.qp_trash()));
  for (std::size_t j = 0; j < n; ++j) tail.add(Gate::x(layout.data(j)));
  tail.add(Gate::x(layout.qp_trash()));
  tail.add(Gate::cnot(layout.sign(), layout.qp_pm()));

  AmplitudeEncodingCircuit out{
      layout, all_at_once_on(spec, x, decompose(alpha), training, layout).then(tail), {}, {}};
  out.good_plus.require(layout.qp_trash(), false).require(layout.qp_pm(), false);
  out.good_minus.require(layout.qp_trash(), false).require(layout.qp_pm(), true);
  return out;
}

Circuit build_kernel_circuit(const FeatureMapSpec& spec, const DataPoint& x,
                             const DataPoint& x2) {
  return build_U(spec, x).then(build_U(spec, x2).inverse());
}

OracleBundle build_oracle_bundle(const FeatureMapSpec& spec, const DataPoint& x,
                                 const CoefficientVector& alpha, const TrainingSet& training,
                                 bool with_v) {
  check_instance(spec, x, alpha, training);
  const RegisterLayout layout = with_v
                                    ? RegisterLayout::amplitude_encoding(spec.num_qubits,
                                                                         training.size())
                                    : RegisterLayout::all_at_once(spec.num_qubits,
                                                                  training.size());
  OracleBundle b{layout,
                 build_U(spec, x),
                 build_W(decompose(alpha)),
                 build_O_dagger(spec, training, layout),
                 std::nullopt,
                 {}};
  if (with_v) b.v = build_V(spec, x, alpha, training).circuit;
  b.charged_costs = {b.u_x.abstract_cost(), b.w_alpha.charged_cost, b.o_dagger_s.abstract_cost()};
  return b;
}

}  // namespace qkinfer
