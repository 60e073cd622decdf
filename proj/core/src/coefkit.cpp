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

#include "qkinfer/coefkit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qkinfer {

CoefficientVector::CoefficientVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("coefficient vector must have at least one entry");
  }
  bool any_nonzero = false;
  for (double a : entries_) {
    if (!std::isfinite(a)) {
      throw std::invalid_argument("coefficient vector has a non-finite entry");
    }
    any_nonzero = any_nonzero || a != 0.0;
  }
  if (!any_nonzero) {
    throw std::invalid_argument("zero coefficient vector");
  }
}

std::vector<std::size_t> CoefDecomposition::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) out.push_back(i);
  }
  return out;
}

std::vector<double> CoefDecomposition::coefficients() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = coefficient(i);
  return out;
}

CoefDecomposition decompose(const CoefficientVector& alpha) {
  CoefDecomposition d;
  for (double a : alpha.entries()) d.l1_norm += std::abs(a);
  d.probs.reserve(alpha.size());
  d.signs.reserve(alpha.size());
  for (double a : alpha.entries()) {
    d.probs.push_back(std::abs(a) / d.l1_norm);
    d.signs.push_back(a < 0.0 ? -1 : +1);
  }
  return d;
}

double pnorm(std::span<const double> alpha, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (double a : alpha) s += std::abs(a);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double a : alpha) s += a * a;
    return std::sqrt(s);
  }
  if (std::abs(p - kTwoThirds) < 1e-12) {
    double s = 0.0;
    for (double a : alpha) s += std::cbrt(a * a);
    return s * std::sqrt(s);
  }
  throw std::invalid_argument("pnorm: unsupported exponent " + std::to_string(p) +
                              " (expected 2/3, 1 or 2)");
}

double pnorm(const CoefficientVector& alpha, double p) { return pnorm(alpha.entries(), p); }

double pnorm(const CoefDecomposition& decomp, double p) {
  return pnorm(decomp.coefficients(), p);
}

SignedParts f_plus_minus_exact(const CoefDecomposition& decomp, std::span<const double> kernels) {
  if (kernels.size() != decomp.size()) {
    throw std::invalid_argument("f_plus_minus_exact: expected " + std::to_string(decomp.size()) +
                                " kernel values, got " + std::to_string(kernels.size()));
  }
  SignedParts out;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const double k = kernels[i];
    if (!(k >= -kKernelRangeTolerance && k <= 1.0 + kKernelRangeTolerance)) {
      throw std::invalid_argument("f_plus_minus_exact: kernel value " + std::to_string(k) +
                                  " outside [0, 1]");
    }
    const double term = decomp.probs[i] * k;
    if (decomp.signs[i] > 0) {
      out.f_plus += term;
    } else {
      out.f_minus += term;
    }
  }
  return out;
}

}  // namespace qkinfer
