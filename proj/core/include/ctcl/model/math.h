// Copyright 2026 The CTCL Authors
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

#ifndef CTCL_MODEL_MATH_H_
#define CTCL_MODEL_MATH_H_

#include <cmath>
#include <span>

namespace ctcl {
namespace model {

// Numerically stable in-place softmax of one row.
inline void SoftmaxInPlace(std::span<double> row) {
  double max_value = row[0];
  for (const double x : row) max_value = std::max(max_value, x);
  double total = 0.0;
  for (double& x : row) {
    x = std::exp(x - max_value);
    total += x;
  }
  for (double& x : row) x /= total;
}

// log(sum(exp(row))), stable.
inline double LogSumExpRow(std::span<const double> row) {
  double max_value = row[0];
  for (const double x : row) max_value = std::max(max_value, x);
  double total = 0.0;
  for (const double x : row) total += std::exp(x - max_value);
  return max_value + std::log(total);
}

// Gaussian-error-linear unit and its derivative (exact erf form).
inline double Gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
}

inline double GeluDerivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return cdf + x * pdf;
}

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_MATH_H_
