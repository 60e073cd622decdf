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

#include "qkinfer/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qkinfer/errors.hpp"

namespace qkinfer {

std::string_view strategy_name(StrategyId id) noexcept {
  switch (id) {
    case StrategyId::kLsFixedSampling: return "list-sum-fixed-sampling";
    case StrategyId::kLsAdaptiveSampling: return "list-sum-adaptive-sampling";
    case StrategyId::kLsFixedQae: return "list-sum-fixed-qae";
    case StrategyId::kLsAdaptiveQae: return "list-sum-adaptive-qae";
    case StrategyId::kAaoSampling: return "all-at-once-sampling";
    case StrategyId::kAaoQae: return "all-at-once-qae";
    case StrategyId::kSampleAverage: return "sample-average";
  }
  return "?";
}

std::string_view strategy_enum_name(StrategyId id) noexcept {
  switch (id) {
    case StrategyId::kLsFixedSampling: return "LS_FIXED_SAMPLING";
    case StrategyId::kLsAdaptiveSampling: return "LS_ADAPTIVE_SAMPLING";
    case StrategyId::kLsFixedQae: return "LS_FIXED_QAE";
    case StrategyId::kLsAdaptiveQae: return "LS_ADAPTIVE_QAE";
    case StrategyId::kAaoSampling: return "AAO_SAMPLING";
    case StrategyId::kAaoQae: return "AAO_QAE";
    case StrategyId::kSampleAverage: return "SAMPLE_AVERAGE";
  }
  return "?";
}

std::optional<StrategyId> parse_strategy(std::string_view name) noexcept {
  for (StrategyId id : kAllStrategies) {
    if (name == strategy_name(id) || name == strategy_enum_name(id)) return id;
  }
  return std::nullopt;
}

namespace {

void check_budget_args(double epsilon, double delta, int r) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive, got " + std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1), got " + std::to_string(delta));
  }
  if (r != 1 && r != 2) throw std::invalid_argument("r must be 1 or 2");
}

std::uint64_t ceil_at_least_one(double v) {
  if (!std::isfinite(v) || v > 9.0e18) throw std::overflow_error("query budget overflows");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v)));
}

}  // namespace

double variance_budget(double epsilon, double delta) {
  check_budget_args(epsilon, delta, 1);
  return epsilon * epsilon / (2.0 * std::log(2.0 / delta));
}

BudgetAllocation allocate_budget(const CoefDecomposition& decomp, double epsilon, double delta,
                                 int r, double multiplier) {
  check_budget_args(epsilon, delta, r);
  if (!(multiplier > 0.0)) throw std::invalid_argument("multiplier must be positive");
  const double C = variance_budget(epsilon, delta);
  const std::vector<double> alpha = decomp.coefficients();
  // r = 1: |a_i| |a|_1 / C.  r = 2: |a_i|^(2/3) |a|_{2/3}^(1/3) / sqrt(C).
  const double norm = r == 1 ? pnorm(alpha, 1.0) : pnorm(alpha, kTwoThirds);
  const double norm_factor = r == 1 ? norm : std::cbrt(norm);
  const double scale = multiplier * norm_factor / (r == 1 ? C : std::sqrt(C));
  BudgetAllocation out;
  out.per_index.assign(alpha.size(), 0);
  for (std::size_t i : decomp.support()) {
    const double a = std::abs(alpha[i]);
    const double weight = r == 1 ? a : std::cbrt(a * a);
    out.per_index[i] = ceil_at_least_one(weight * scale);
    out.total += out.per_index[i];
  }
  return out;
}

BudgetAllocation fixed_budget(const CoefDecomposition& decomp, double epsilon, double delta,
                              int r, double multiplier) {
  check_budget_args(epsilon, delta, r);
  if (!(multiplier > 0.0)) throw std::invalid_argument("multiplier must be positive");
  const double C = variance_budget(epsilon, delta);
  const std::vector<std::size_t> support = decomp.support();
  const auto ns = static_cast<double>(support.size());
  const double l2 = pnorm(decomp, 2.0);
  const double total = r == 1 ? multiplier * ns * l2 * l2 / C : multiplier * ns * l2 / std::sqrt(C);
  const std::uint64_t each = ceil_at_least_one(static_cast<double>(ceil_at_least_one(total)) / ns);
  BudgetAllocation out;
  out.per_index.assign(decomp.size(), 0);
  for (std::size_t i : support) {
    out.per_index[i] = each;
    out.total += each;
  }
  return out;
}

double allocation_variance(const CoefDecomposition& decomp, const BudgetAllocation& allocation,
                           int r) {
  if (allocation.per_index.size() != decomp.size()) {
    throw std::invalid_argument("allocation length differs from the coefficient vector");
  }
  double v = 0.0;
  for (std::size_t i : decomp.support()) {
    if (allocation.per_index[i] == 0) return INFINITY;
    const double a = decomp.coefficient(i);
    v += a * a / std::pow(static_cast<double>(allocation.per_index[i]), r);
  }
  return v;
}

PreparedInstance::PreparedInstance(Instance instance, GroverBackend backend)
    : instance_(std::move(instance)),
      backend_(backend),
      decomp_(decompose(instance_.alpha)),
      model_(GateCostModel::from(instance_.spec, instance_.training.size())) {
  const auto& [spec, alpha, training, x] = instance_;
  if (alpha.size() != training.size()) {
    throw std::invalid_argument("coefficient vector has " + std::to_string(alpha.size()) +
                                " entries for " + std::to_string(training.size()) +
                                " training points");
  }
  exact_ = f_exact(spec, alpha, training, x);

  const std::vector<std::size_t> data(RegisterLayout::all_at_once(spec.num_qubits, 1).data_qubits());
  const ProjectorSpec data_zero = ProjectorSpec::all(data, false);
  kernel_grover_.reserve(training.size());
  for (const auto& p : training.points()) {
    kernel_grover_.emplace_back(build_kernel_circuit(spec, x, p.x), data_zero, backend);
    const double a = kernel_grover_.back().amplitude();
    kernel_probs_.push_back(a * a);
  }

  const AllAtOnceCircuit aao = build_all_at_once(spec, x, alpha, training);
  const QuantumState out = apply(aao.circuit, QuantumState(aao.layout.width()));
  ProjectorSpec plus = aao.measurement.data_zero;
  plus.require(aao.layout.sign(), false);
  ProjectorSpec minus = aao.measurement.data_zero;
  minus.require(aao.layout.sign(), true);
  aao_plus_ = projector_probability(out, plus);
  aao_minus_ = projector_probability(out, minus);

  try {
    AmplitudeEncodingCircuit v = build_V(spec, x, alpha, training);
    v_plus_.emplace(v.circuit, v.good_plus, backend);
    v_minus_.emplace(std::move(v.circuit), v.good_minus, backend);
  } catch (const WidthOverflowError&) {
    // Only the amplitude-estimation all-at-once strategy needs V.
  }
}

const GroverSpec& PreparedInstance::v_plus() const {
  if (!v_plus_) throw WidthOverflowError("instance too wide for the amplitude-encoding circuit");
  return *v_plus_;
}

const GroverSpec& PreparedInstance::v_minus() const {
  if (!v_minus_) throw WidthOverflowError("instance too wide for the amplitude-encoding circuit");
  return *v_minus_;
}

namespace {

QaeConfig qae_config(const Calibration& cal) {
  return {cal.qae_shots_per_round, cal.qae_min_ratio};
}

// Draws counts[i] ~ Multinomial(total, probs) with sequential binomials.
std::vector<std::uint64_t> multinomial(std::uint64_t total, const std::vector<double>& probs,
                                       SeededStream& rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double remaining_mass = 1.0;
  std::uint64_t remaining = total;
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    const double q = remaining_mass > 0.0 ? probs[i] / remaining_mass : 1.0;
    counts[i] = sample_bernoulli(q, remaining, rng);
    remaining -= counts[i];
    remaining_mass -= probs[i];
  }
  // Round-off leftovers go to the last support index.
  if (remaining > 0) {
    for (std::size_t i = probs.size(); i-- > 0;) {
      if (probs[i] > 0.0) {
        counts[i] += remaining;
        break;
      }
    }
  }
  return counts;
}

void run_list_sampling(const PreparedInstance& prep, const BudgetAllocation& budget,
                       SeededStream& rng, EstimateReport& report) {
  const auto& d = prep.decomposition();
  for (std::size_t i : d.support()) {
    const std::uint64_t m = budget.per_index[i];
    const std::uint64_t hits = sample_bernoulli(prep.kernel_probabilities()[i], m, rng);
    report.estimate += d.coefficient(i) * static_cast<double>(hits) / static_cast<double>(m);
    report.counter.count_queries(m);
    report.counter.record(OracleKind::kUx, 2 * m);
  }
}

void run_list_qae(const PreparedInstance& prep, const BudgetAllocation& budget,
                  const InferenceOptions& opt, SeededStream& rng, EstimateReport& report) {
  const auto& d = prep.decomposition();
  const double run_delta = std::min(0.5, opt.delta);
  for (std::size_t i : d.support()) {
    const double eps_i = std::min(0.5, 1.0 / static_cast<double>(budget.per_index[i]));
    const AmplitudeEstimate a =
        qae_estimate(prep.kernel_grover(i), eps_i, run_delta, rng, qae_config(opt.calibration));
    report.estimate += d.coefficient(i) * a.value * a.value;
    report.counter.count_queries(a.counter.total_queries());
    report.counter.record(OracleKind::kUx, 2 * a.counter.total_queries());
    report.below_precision_runs += a.below_precision_regime ? 1 : 0;
  }
}

void run_aao_sampling(const PreparedInstance& prep, const InferenceOptions& opt,
                      SeededStream& rng, EstimateReport& report) {
  const double l1 = prep.decomposition().l1_norm;
  const double C = variance_budget(opt.epsilon, opt.delta);
  const std::uint64_t shots =
      ceil_at_least_one(opt.calibration.multiplier(StrategyId::kAaoSampling) * l1 * l1 / C);
  const std::uint64_t plus = sample_bernoulli(prep.aao_plus(), shots, rng);
  const double rest = 1.0 - prep.aao_plus();
  const std::uint64_t minus =
      rest > 0.0 ? sample_bernoulli(prep.aao_minus() / rest, shots - plus, rng) : 0;
  report.estimate = l1 * (static_cast<double>(plus) - static_cast<double>(minus)) /
                    static_cast<double>(shots);
  report.counter.count_queries(shots);
  report.counter.record(OracleKind::kUx, shots);
  report.counter.record(OracleKind::kW, shots);
  report.counter.record(OracleKind::kODagger, shots);
}

void run_aao_qae(const PreparedInstance& prep, const InferenceOptions& opt, SeededStream& rng,
                 EstimateReport& report) {
  const double l1 = prep.decomposition().l1_norm;
  const double eps_a =
      std::min(0.5, opt.epsilon / (4.0 * l1 * opt.calibration.multiplier(StrategyId::kAaoQae)));
  const double run_delta = std::min(0.5, opt.delta / 2.0);
  const QaeConfig cfg = qae_config(opt.calibration);
  const AmplitudeEstimate plus = qae_estimate(prep.v_plus(), eps_a, run_delta, rng, cfg);
  const AmplitudeEstimate minus = qae_estimate(prep.v_minus(), eps_a, run_delta, rng, cfg);
  report.estimate = l1 * (plus.value * plus.value - minus.value * minus.value);
  for (const AmplitudeEstimate* a : {&plus, &minus}) {
    report.counter += a->counter;
    const std::uint64_t calls = a->counter[OracleKind::kV] + a->counter[OracleKind::kVDagger];
    report.counter.record(OracleKind::kUx, calls);
    report.counter.record(OracleKind::kW, calls);
    report.counter.record(OracleKind::kODagger, calls);
    report.below_precision_runs += a->below_precision_regime ? 1 : 0;
  }
}

void run_sample_average(const PreparedInstance& prep, const InferenceOptions& opt,
                        SeededStream& rng, EstimateReport& report) {
  const auto& d = prep.decomposition();
  const double C = variance_budget(opt.epsilon, opt.delta);
  const std::uint64_t outer = ceil_at_least_one(
      opt.calibration.multiplier(StrategyId::kSampleAverage) * d.l1_norm * d.l1_norm / C);
  const std::vector<std::uint64_t> draws = multinomial(outer, d.probs, rng);

  double sum = 0.0;
  if (!opt.sample_average_qae_inner) {
    const std::uint64_t inner = opt.calibration.sample_average_inner_shots;
    for (std::size_t i : d.support()) {
      if (draws[i] == 0) continue;
      const std::uint64_t shots = draws[i] * inner;
      const std::uint64_t hits = sample_bernoulli(prep.kernel_probabilities()[i], shots, rng);
      sum += d.signs[i] * static_cast<double>(hits) / static_cast<double>(inner);
      report.counter.count_queries(shots);
      report.counter.record(OracleKind::kUx, 2 * shots);
    }
  } else {
    const double inner_eps =
        std::min(0.5, 1.0 / static_cast<double>(opt.calibration.sample_average_qae_inner_shots));
    const QaeConfig cfg = qae_config(opt.calibration);
    for (std::size_t i : d.support()) {
      for (std::uint64_t j = 0; j < draws[i]; ++j) {
        const AmplitudeEstimate a =
            qae_estimate(prep.kernel_grover(i), inner_eps, std::min(0.5, opt.delta), rng, cfg);
        sum += d.signs[i] * a.value * a.value;
        report.counter.count_queries(a.counter.total_queries());
        report.counter.record(OracleKind::kUx, 2 * a.counter.total_queries());
        report.below_precision_runs += a.below_precision_regime ? 1 : 0;
      }
    }
  }
  report.estimate = d.l1_norm * sum / static_cast<double>(outer);
}

}  // namespace

EstimateReport infer(StrategyId strategy, const PreparedInstance& prepared,
                     const InferenceOptions& options, std::uint64_t seed) {
  check_budget_args(options.epsilon, options.delta, 1);
  EstimateReport report;
  report.strategy = strategy;
  report.exact = prepared.exact();
  report.epsilon_target = options.epsilon;
  report.delta = options.delta;
  report.seed = seed;

  SeededStream rng(seed);
  const auto& d = prepared.decomposition();
  const double mult = options.calibration.multiplier(strategy);
  switch (strategy) {
    case StrategyId::kLsFixedSampling:
      run_list_sampling(prepared, fixed_budget(d, options.epsilon, options.delta, 1, mult), rng,
                        report);
      break;
    case StrategyId::kLsAdaptiveSampling:
      report.allocation = allocate_budget(d, options.epsilon, options.delta, 1, mult);
      run_list_sampling(prepared, *report.allocation, rng, report);
      break;
    case StrategyId::kLsFixedQae:
      run_list_qae(prepared, fixed_budget(d, options.epsilon, options.delta, 2, mult), options,
                   rng, report);
      break;
    case StrategyId::kLsAdaptiveQae:
      report.allocation = allocate_budget(d, options.epsilon, options.delta, 2, mult);
      run_list_qae(prepared, *report.allocation, options, rng, report);
      break;
    case StrategyId::kAaoSampling:
      run_aao_sampling(prepared, options, rng, report);
      break;
    case StrategyId::kAaoQae:
      run_aao_qae(prepared, options, rng, report);
      break;
    case StrategyId::kSampleAverage:
      run_sample_average(prepared, options, rng, report);
      break;
  }
  report.gates_per_query = gates_per_query(strategy, prepared.cost_model());
  report.modeled_gates = report.gates_per_query * report.counter.total_queries();
  return report;
}

int sign_of(const EstimateReport& report) noexcept { return report.estimate < 0.0 ? -1 : +1; }

}  // namespace qkinfer
