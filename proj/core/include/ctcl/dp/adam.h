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

#ifndef CTCL_DP_ADAM_H_
#define CTCL_DP_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ctcl {
namespace dp {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // decoupled
};

// Linear warmup to the peak over `warmup` steps, then linear decay to zero
// at `total_steps`. Valid for t in [1, total_steps].
struct LrSchedule {
  double peak = 1e-3;
  int64_t warmup = 100;
  int64_t total_steps = 1;

  double At(int64_t t) const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;

  explicit AdamState(int64_t dimension)
      : m(static_cast<size_t>(dimension), 0.0),
        v(static_cast<size_t>(dimension), 0.0) {}
};

// One bias-corrected Adam step with decoupled weight decay. Refuses the step
// (state and params untouched) if the gradient has a non-finite component.
void AdamStep(std::span<double> params, std::span<const double> gradient,
              AdamState& state, const AdamConfig& config, double lr);

}  // namespace dp
}  // namespace ctcl

#endif  // CTCL_DP_ADAM_H_
