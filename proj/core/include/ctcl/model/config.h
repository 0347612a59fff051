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

#ifndef CTCL_MODEL_CONFIG_H_
#define CTCL_MODEL_CONFIG_H_

#include <cstdint>
#include <string>

namespace ctcl {
namespace model {

// A conditional encoder-decoder generator, or a decoder-only causal LM for
// downstream evaluation. All sizes are config-driven.
struct ModelConfig {
  enum class Mode { kEncoderDecoder, kDecoderOnly };

  Mode mode = Mode::kEncoderDecoder;
  int64_t vocab_size = 0;
  int64_t d_model = 64;
  int64_t n_layers = 2;
  int64_t n_heads = 2;
  int64_t ffn_dim = 128;
  int64_t max_len = 128;
  uint64_t seed = 0;

  int64_t head_dim() const { return d_model / n_heads; }

  // Throws ConfigError when shape constraints are violated.
  void Validate() const;

  std::string ToJson() const;
  static ModelConfig FromJson(const std::string& json_text);

  bool operator==(const ModelConfig&) const = default;
};

struct SamplerConfig {
  double top_p = 0.95;
  double temperature = 1.0;
  int64_t max_new_tokens = 128;

  void Validate() const;
};

struct TrainConfig {
  int64_t steps = 500;
  int64_t batch_size = 64;
  double peak_lr = 1e-3;
  int64_t warmup = 100;
  double weight_decay = 0.1;
  double clip_norm = 1.0;
  double noise_multiplier = 0.0;  // 0 = non-private
  uint64_t seed = 0;

  void Validate() const;
};

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_CONFIG_H_
