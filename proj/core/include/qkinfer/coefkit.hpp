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
#include <span>
#include <vector>

namespace qkinfer {

/// Absolute tolerance for reconstructing alpha from its decomposition.
inline constexpr double kReconstructionTolerance = 1e-12;
/// Absolute tolerance for the identity l1 * (f+ - f-) == sum_i alpha_i k_i.
inline constexpr double kSplitIdentityTolerance = 1e-10;
/// Kernel values may exceed [0, 1] by this much from round-off.
inline constexpr double kKernelRangeTolerance = 1e-9;

/// The exponents accepted by `pnorm`.
inline constexpr double kTwoThirds = 2.0 / 3.0;

/// Trained weights of a kernel model. Finite, nonempty, not all zero.
class CoefficientVector {
 public:
  /// Throws std::invalid_argument on an empty, non-finite or all-zero vector
  /// ("zero coefficient vector").
  explicit CoefficientVector(std::vector<double> entries);

  std::span<const double> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<double> entries_;
};

/// alpha_i = l1_norm * probs[i] * signs[i].
///
/// Zero coefficients get sign +1 and probability 0, and are left out of
/// `support()`.
struct CoefDecomposition {
  double l1_norm = 0.0;
  std::vector<double> probs;
  std::vector<int> signs;

  std::size_t size() const noexcept { return probs.size(); }
  double coefficient(std::size_t i) const { return l1_norm * probs[i] * signs[i]; }
  /// Indices with a nonzero coefficient, ascending.
  std::vector<std::size_t> support() const;
  /// Coefficients rebuilt from the decomposition.
  std::vector<double> coefficients() const;
};

CoefDecomposition decompose(const CoefficientVector& alpha);

/// (sum_i |alpha_i|^p)^(1/p) for p in {2/3, 1, 2}. Any other p throws
/// std::invalid_argument.
double pnorm(std::span<const double> alpha, double p);
double pnorm(const CoefficientVector& alpha, double p);
double pnorm(const CoefDecomposition& decomp, double p);

struct SignedParts {
  double f_plus = 0.0;
  double f_minus = 0.0;
};

/// f_plus / f_minus: the probability mass of positive / negative coefficients
/// weighted by the kernel values. Kernels outside [0, 1] by more than
/// kKernelRangeTolerance, or a length mismatch, throw std::invalid_argument.
SignedParts f_plus_minus_exact(const CoefDecomposition& decomp,
                               std::span<const double> kernels);

}  // namespace qkinfer
