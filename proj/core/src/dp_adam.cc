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

#include "ctcl/dp/adam.h"

#include <cmath>

#include "ctcl/error.h"

namespace ctcl {
namespace dp {

double LrSchedule::At(int64_t t) const {
  if (t < 1 || t > total_steps) {
    throw ConfigError("schedule step " + std::to_string(t) +
                      " outside [1, " + std::to_string(total_steps) + "]");
  }
  if (warmup > 0 && t <= warmup) {
    return peak * static_cast<double>(t) / static_cast<double>(warmup);
  }
  if (total_steps == warmup) return peak;
  return peak * static_cast<double>(total_steps - t) /
         static_cast<double>(total_steps - warmup);
}

void AdamStep(std::span<double> params, std::span<const double> gradient,
              AdamState& state, const AdamConfig& config, double lr) {
  const size_t n = params.size();
  if (gradient.size() != n || state.m.size() != n || state.v.size() != n) {
    throw ConfigError("Adam: parameter/gradient/state shape mismatch");
  }
  for (const double g : gradient) {
    if (!std::isfinite(g)) {
      throw NumericError("Adam: non-finite gradient, step refused");
    }
  }
  state.t += 1;
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < n; ++i) {
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * gradient[i];
    state.v[i] = config.beta2 * state.v[i] +
                 (1.0 - config.beta2) * gradient[i] * gradient[i];
    const double m_hat = state.m[i] / bias1;
    const double v_hat = state.v[i] / bias2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + config.epsilon) +
                       config.weight_decay * params[i]);
  }
}

}  // namespace dp
}  // namespace ctcl
