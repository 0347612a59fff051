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

#ifndef CTCL_MODEL_PARAMETERS_H_
#define CTCL_MODEL_PARAMETERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctcl/model/config.h"

namespace ctcl {
namespace model {

struct TensorInfo {
  std::string name;
  std::vector<int64_t> dims;
  int64_t offset = 0;  // into the flat buffer
  int64_t size = 0;    // product of dims
};

// A named set of tensors stored in one flat buffer, ordered lexicographically
// by name (row-major within each tensor). Gradients use the same layout, so
// flat vectors line up coordinate-for-coordinate.
class Parameters {
 public:
  Parameters() = default;

  // Builds the fixed tensor layout for `config`, zero-initialized.
  static Parameters Zeros(const ModelConfig& config);

  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  int64_t size() const { return static_cast<int64_t>(values_.size()); }

  std::span<double> flat() { return values_; }
  std::span<const double> flat() const { return values_; }

  std::span<double> tensor(const std::string& name);
  std::span<const double> tensor(const std::string& name) const;
  const TensorInfo& info(const std::string& name) const;
  bool has(const std::string& name) const;

 private:
  std::vector<TensorInfo> tensors_;
  std::vector<double> values_;
};

// Deterministic initialization from config.seed: weights uniform in
// (-1/sqrt(fan_in), +1/sqrt(fan_in)), layer-norm gains 1, biases 0.
Parameters InitParameters(const ModelConfig& config);

// Closed-form total parameter count implied by the config.
int64_t ParameterCount(const ModelConfig& config);

// Binary checkpoint: magic "CTCLCKPT", u32 version, length-prefixed JSON
// config block, then per-tensor records in lexicographic name order
// (u32 name length, name bytes, u32 rank, u64 dims, little-endian f64 data).
void SaveCheckpoint(const Parameters& params, const ModelConfig& config,
                    const std::string& path);

struct Checkpoint {
  Parameters params;
  ModelConfig config;
};

Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_PARAMETERS_H_
