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
#include <initializer_list>
#include <limits>

namespace qkinfer {

/// Counter-based pseudo-random stream.
///
/// Output `j` of a stream is `mix(key + j * gamma)` with the SplitMix64
/// finalizer, so a stream is fully determined by its key and advancing one
/// stream never perturbs another. Streams for independent experiment cells
/// are obtained with `derive`, which hashes a tuple of integers into a key.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions.
class SeededStream {
 public:
  using result_type = std::uint64_t;

  explicit SeededStream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Child stream keyed by (this key, tag); does not advance this stream.
  [[nodiscard]] SeededStream split(std::uint64_t tag) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  /// Hash an ordered tuple of integers into a stream key.
  static std::uint64_t derive(std::initializer_list<std::uint64_t> parts) noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace qkinfer
