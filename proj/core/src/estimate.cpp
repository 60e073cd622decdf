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

#include "qkinfer/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace qkinfer {

std::string_view oracle_name(OracleKind kind) noexcept {
  switch (kind) {
    case OracleKind::kUx: return "U(x)";
    case OracleKind::kW: return "W(alpha)";
    case OracleKind::kODagger: return "O_dagger(S)";
    case OracleKind::kV: return "V";
    case OracleKind::kVDagger: return "V_dagger";
  }
  return "?";
}

QueryCounter& QueryCounter::operator+=(const QueryCounter& other) noexcept {
  for (std::size_t i = 0; i < kNumOracleKinds; ++i) per_oracle_[i] += other.per_oracle_[i];
  total_ += other.total_;
  return *this;
}

std::string_view backend_name(GroverBackend backend) noexcept {
  return backend == GroverBackend::kAnalytic2d ? "analytic2d" : "fullstate";
}

std::optional<GroverBackend> parse_backend(std::string_view name) noexcept {
  if (name == "analytic2d") return GroverBackend::kAnalytic2d;
  if (name == "fullstate") return GroverBackend::kFullstate;
  return std::nullopt;
}

double grover_good_probability(double amplitude, std::uint64_t k) {
  if (!(amplitude >= -1e-12 && amplitude <= 1.0 + 1e-12)) {
    throw std::invalid_argument("amplitude " + std::to_string(amplitude) + " outside [0, 1]");
  }
  const double theta = std::asin(std::clamp(amplitude, 0.0, 1.0));
  const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
  return s * s;
}

GroverSpec::GroverSpec(Circuit prep, ProjectorSpec good, GroverBackend backend)
    : prep_(std::make_shared<const Circuit>(std::move(prep))),
      good_(std::move(good)),
      backend_(backend),
      cache_(std::make_shared<FullstateCache>()) {
  prep_inverse_ = std::make_shared<const Circuit>(prep_->inverse());
  const QuantumState s = apply(*prep_, QuantumState(prep_->width()));
  amplitude_ = std::sqrt(std::clamp(projector_probability(s, good_), 0.0, 1.0));
}

GroverSpec GroverSpec::with_backend(GroverBackend backend) const {
  GroverSpec copy = *this;
  copy.backend_ = backend;
  return copy;
}

double GroverSpec::good_probability(std::uint64_t k) const {
  if (backend_ == GroverBackend::kAnalytic2d) return grover_good_probability(amplitude_, k);

  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& probs = cache_->probabilities;
  if (!cache_->state) {
    cache_->state = apply(*prep_, QuantumState(prep_->width()));
    probs.push_back(projector_probability(*cache_->state, good_));
  }
  ProjectorSpec zero;
  for (std::size_t q = 0; q < prep_->width(); ++q) zero.require(q, false);
  while (probs.size() <= k) {
    QuantumState& s = *cache_->state;
    phase_flip(s, good_);
    apply_in_place(*prep_inverse_, s);
    phase_flip(s, zero);
    apply_in_place(*prep_, s);
    probs.push_back(projector_probability(s, good_));
  }
  return probs[k];
}

std::uint64_t sample_bernoulli(double p, std::uint64_t shots, SeededStream& rng) {
  p = std::clamp(p, 0.0, 1.0);
  if (shots == 0 || p == 0.0) return 0;
  if (p == 1.0) return shots;
  std::binomial_distribution<std::uint64_t> dist(shots, p);
  return dist(rng);
}

ProbabilityEstimate sample_probability(const Circuit& circuit, const ProjectorSpec& good,
                                       std::uint64_t shots, SeededStream& rng) {
  if (shots == 0) throw std::invalid_argument("sample_probability needs at least one shot");
  const double p = projector_probability(apply(circuit, QuantumState(circuit.width())), good);
  ProbabilityEstimate out;
  out.p_hat = static_cast<double>(sample_bernoulli(p, shots, rng)) / static_cast<double>(shots);
  out.counter.count_queries(shots);
  return out;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct NextDepth {
  std::uint64_t k;
  bool upper_half;
};

// Largest depth k, at least min_ratio times the current scaling, such that
// (4k + 2) * [lo, hi] fits inside one half-period. Angles in units of 2*pi.
NextDepth find_next_k(std::uint64_t k, bool upper_half, double lo, double hi, double min_ratio) {
  const double old_scaling = static_cast<double>(4 * k + 2);
  const auto max_scaling = static_cast<std::int64_t>(1.0 / (2.0 * (hi - lo)));
  std::int64_t scaling = max_scaling - ((max_scaling - 2) % 4 + 4) % 4;
  while (static_cast<double>(scaling) >= min_ratio * old_scaling) {
    const double s = static_cast<double>(scaling);
    const double a = s * lo - std::floor(s * lo);
    const double b = s * hi - std::floor(s * hi);
    if (a <= b && b <= 0.5) return {static_cast<std::uint64_t>((scaling - 2) / 4), true};
    if (a >= 0.5 && b >= a) return {static_cast<std::uint64_t>((scaling - 2) / 4), false};
    scaling -= 4;
  }
  return {k, upper_half};
}

}  // namespace

AmplitudeEstimate qae_estimate(const GroverSpec& spec, double epsilon, double delta,
                               SeededStream& rng, const QaeConfig& config) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::invalid_argument("qae epsilon must lie in (0, 0.5], got " +
                                std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw std::invalid_argument("qae delta must lie in (0, 0.5], got " + std::to_string(delta));
  }
  if (config.shots_per_round == 0 || !(config.min_ratio > 1.0)) {
    throw std::invalid_argument("invalid qae configuration");
  }

  AmplitudeEstimate est;
  est.epsilon_target = epsilon;
  est.delta = delta;

  // Interval on theta / (2 pi), theta = asin(a) in [0, pi / 2].
  double lo = 0.0;
  double hi = 0.25;
  const double width_goal = epsilon / std::numbers::pi;
  const double max_rounds =
      std::max(1.0, std::floor(std::log(kTwoPi / (8.0 * epsilon)) / std::log(2.0)) + 1.0);
  const double log_term = std::log(2.0 * max_rounds / delta);

  std::uint64_t k = 0;
  bool upper_half = true;
  std::uint64_t pooled_k = 0;
  std::uint64_t pooled_shots = 0;
  std::uint64_t pooled_hits = 0;

  while (hi - lo > width_goal) {
    const NextDepth next = find_next_k(k, upper_half, lo, hi, config.min_ratio);
    k = next.k;
    upper_half = next.upper_half;
    if (est.rounds == 0 || k != pooled_k) {
      pooled_k = k;
      pooled_shots = 0;
      pooled_hits = 0;
    }
    ++est.rounds;
    est.max_depth = std::max(est.max_depth, k);

    const std::uint64_t shots = config.shots_per_round;
    pooled_hits += sample_bernoulli(spec.good_probability(k), shots, rng);
    pooled_shots += shots;
    est.counter.record(OracleKind::kV, shots * (k + 1));
    est.counter.record(OracleKind::kVDagger, shots * k);
    est.counter.count_queries(shots * (2 * k + 1));

    const double freq = static_cast<double>(pooled_hits) / static_cast<double>(pooled_shots);
    const double half = std::sqrt(log_term / (2.0 * static_cast<double>(pooled_shots)));
    const double p_min = std::max(0.0, freq - half);
    const double p_max = std::min(1.0, freq + half);

    double t_min;
    double t_max;
    if (upper_half) {
      t_min = std::acos(1.0 - 2.0 * p_min) / kTwoPi;
      t_max = std::acos(1.0 - 2.0 * p_max) / kTwoPi;
    } else {
      t_min = 1.0 - std::acos(1.0 - 2.0 * p_max) / kTwoPi;
      t_max = 1.0 - std::acos(1.0 - 2.0 * p_min) / kTwoPi;
    }
    const double scaling = static_cast<double>(4 * k + 2);
    const double base = std::floor(scaling * lo);
    const double new_lo = (base + t_min) / scaling;
    const double new_hi = (base + t_max) / scaling;
    if (new_hi < lo || new_lo > hi) {
      lo = new_lo;
      hi = new_hi;
    } else {
      lo = std::max(lo, new_lo);
      hi = std::min(hi, new_hi);
    }
  }

  est.interval_low = std::sin(kTwoPi * lo);
  est.interval_high = std::sin(kTwoPi * hi);
  est.value = std::clamp(0.5 * (est.interval_low + est.interval_high), 0.0, 1.0);
  est.below_precision_regime = est.value < epsilon;
  return est;
}

double median_amplify(const std::function<double(SeededStream&)>& estimator,
                      std::size_t repetitions, SeededStream& rng) {
  if (repetitions == 0 || repetitions % 2 == 0) {
    throw std::invalid_argument("median_amplify needs an odd number of repetitions, got " +
                                std::to_string(repetitions));
  }
  std::vector<double> runs;
  runs.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions; ++r) {
    SeededStream child = rng.split(r);
    runs.push_back(estimator(child));
  }
  std::nth_element(runs.begin(), runs.begin() + static_cast<std::ptrdiff_t>(repetitions / 2),
                   runs.end());
  return runs[repetitions / 2];
}

}  // namespace qkinfer
