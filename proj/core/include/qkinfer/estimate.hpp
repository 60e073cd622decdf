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

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "qkinfer/rng.hpp"
#include "qkinfer/statevec.hpp"

namespace qkinfer {

enum class OracleKind : std::size_t { kUx = 0, kW = 1, kODagger = 2, kV = 3, kVDagger = 4 };
inline constexpr std::size_t kNumOracleKinds = 5;

/// "U(x)", "W(alpha)", "O_dagger(S)", "V", "V_dagger".
std::string_view oracle_name(OracleKind kind) noexcept;

/// Per-oracle invocation counts plus the strategy-level query total.
///
/// The two are updated separately: `record` tallies oracle invocations and
/// `count_queries` advances the total under whatever counting rule the
/// caller follows.
class QueryCounter {
 public:
  void record(OracleKind kind, std::uint64_t count) noexcept {
    per_oracle_[static_cast<std::size_t>(kind)] += count;
  }
  void count_queries(std::uint64_t count) noexcept { total_ += count; }

  std::uint64_t operator[](OracleKind kind) const noexcept {
    return per_oracle_[static_cast<std::size_t>(kind)];
  }
  std::uint64_t total_queries() const noexcept { return total_; }

  QueryCounter& operator+=(const QueryCounter& other) noexcept;
  friend bool operator==(const QueryCounter&, const QueryCounter&) = default;

 private:
  std::array<std::uint64_t, kNumOracleKinds> per_oracle_{};
  std::uint64_t total_ = 0;
};

enum class GroverBackend { kAnalytic2d, kFullstate };

std::string_view backend_name(GroverBackend backend) noexcept;
std::optional<GroverBackend> parse_backend(std::string_view name) noexcept;

/// sin^2((2k + 1) asin a). Throws std::invalid_argument for a outside [0, 1]
/// beyond 1e-12.
double grover_good_probability(double amplitude, std::uint64_t k);

/// A state preparation together with its marked subspace.
///
/// The good amplitude is computed once from the statevector at
/// construction. The fullstate backend simulates (V S0 V^dagger S_good)^k V|0>
/// and memoizes the per-k probabilities; the cache is shared by copies and
/// guarded by a mutex.
class GroverSpec {
 public:
  GroverSpec(Circuit prep, ProjectorSpec good, GroverBackend backend);

  const Circuit& prep() const noexcept { return *prep_; }
  const ProjectorSpec& good() const noexcept { return good_; }
  GroverBackend backend() const noexcept { return backend_; }
  /// Exact amplitude of the good component of prep|0>.
  double amplitude() const noexcept { return amplitude_; }
  double good_probability(std::uint64_t k) const;
  GroverSpec with_backend(GroverBackend backend) const;

 private:
  struct FullstateCache {
    std::mutex mutex;
    std::vector<double> probabilities;
    std::optional<QuantumState> state;
  };

  std::shared_ptr<const Circuit> prep_;
  std::shared_ptr<const Circuit> prep_inverse_;
  ProjectorSpec good_;
  GroverBackend backend_;
  double amplitude_ = 0.0;
  std::shared_ptr<FullstateCache> cache_;
};

/// Number of successes in `shots` Bernoulli(p) trials.
std::uint64_t sample_bernoulli(double p, std::uint64_t shots, SeededStream& rng);

struct ProbabilityEstimate {
  double p_hat = 0.0;
  QueryCounter counter;
};

/// Fraction of `shots` measurements of circuit|0> that land in `good`.
/// Records `shots` queries. Throws std::invalid_argument for shots == 0.
ProbabilityEstimate sample_probability(const Circuit& circuit, const ProjectorSpec& good,
                                       std::uint64_t shots, SeededStream& rng);

struct QaeConfig {
  std::uint64_t shots_per_round = 64;
  double min_ratio = 2.0;
};

struct AmplitudeEstimate {
  double value = 0.0;
  double epsilon_target = 0.0;
  double delta = 0.0;
  QueryCounter counter;
  double interval_low = 0.0;
  double interval_high = 1.0;
  std::size_t rounds = 0;
  std::uint64_t max_depth = 0;
  /// The estimate fell below the target precision, where the O(1/eps)
  /// guarantee does not apply.
  bool below_precision_regime = false;
};

/// Iterative amplitude estimation with a geometric Grover-depth schedule.
///
/// Each round picks the largest depth k whose rotated confidence interval
/// stays inside one half-period, draws `shots_per_round` measurements of
/// Q^k V|0>, and intersects the Chernoff interval with the running one.
/// Shots at a repeated depth are pooled. Stops once the amplitude interval
/// has half-width at most epsilon. Counting: a shot at depth k costs k + 1
/// applications of V and k of V^dagger, 2k + 1 queries in total.
AmplitudeEstimate qae_estimate(const GroverSpec& spec, double epsilon, double delta,
                               SeededStream& rng, const QaeConfig& config = {});

/// Median of `repetitions` runs, run r drawing from rng.split(r). Even or
/// zero repetitions throw std::invalid_argument.
double median_amplify(const std::function<double(SeededStream&)>& estimator,
                      std::size_t repetitions, SeededStream& rng);

}  // namespace qkinfer
