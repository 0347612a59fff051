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

#include "ctcl/model/config.h"

#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace model {

using nlohmann::json;

void ModelConfig::Validate() const {
  if (vocab_size < 6) throw ConfigError("model: vocab_size must be at least 6");
  if (d_model < 1 || n_layers < 1 || n_heads < 1 || ffn_dim < 1) {
    throw ConfigError("model: sizes must be positive");
  }
  if (d_model % n_heads != 0) {
    throw ConfigError("model: d_model must be divisible by n_heads");
  }
  if (max_len < 4) throw ConfigError("model: max_len must be at least 4");
}

std::string ModelConfig::ToJson() const {
  json j{{"mode", mode == Mode::kEncoderDecoder ? "encoder_decoder"
                                                : "decoder_only"},
         {"vocab_size", vocab_size},
         {"d_model", d_model},
         {"n_layers", n_layers},
         {"n_heads", n_heads},
         {"ffn_dim", ffn_dim},
         {"max_len", max_len},
         {"seed", seed}};
  return j.dump();
}

ModelConfig ModelConfig::FromJson(const std::string& json_text) {
  ModelConfig config;
  try {
    const json j = json::parse(json_text);
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "encoder_decoder") {
      config.mode = Mode::kEncoderDecoder;
    } else if (mode == "decoder_only") {
      config.mode = Mode::kDecoderOnly;
    } else {
      throw ConfigError("model: unknown mode " + mode);
    }
    config.vocab_size = j.at("vocab_size").get<int64_t>();
    config.d_model = j.at("d_model").get<int64_t>();
    config.n_layers = j.at("n_layers").get<int64_t>();
    config.n_heads = j.at("n_heads").get<int64_t>();
    config.ffn_dim = j.at("ffn_dim").get<int64_t>();
    config.max_len = j.at("max_len").get<int64_t>();
    config.seed = j.value("seed", static_cast<uint64_t>(0));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model config: ") + e.what());
  }
  config.Validate();
  return config;
}

void SamplerConfig::Validate() const {
  if (!(top_p > 0.0) || top_p > 1.0) {
    throw ConfigError("sampler: top_p must be in (0, 1]");
  }
  if (!(temperature > 0.0)) {
    throw ConfigError("sampler: temperature must be positive");
  }
  if (max_new_tokens < 1) {
    throw ConfigError("sampler: max_new_tokens must be positive");
  }
}

void TrainConfig::Validate() const {
  if (steps < 1) throw ConfigError("train: steps must be positive");
  if (batch_size < 1) throw ConfigError("train: batch_size must be positive");
  if (!(peak_lr > 0.0)) throw ConfigError("train: peak_lr must be positive");
  if (warmup < 0 || warmup > steps) {
    throw ConfigError("train: warmup must be in [0, steps]");
  }
  if (weight_decay < 0.0) throw ConfigError("train: weight_decay must be nonnegative");
  if (!(clip_norm > 0.0)) throw ConfigError("train: clip_norm must be positive");
  if (noise_multiplier < 0.0) {
    throw ConfigError("train: noise_multiplier must be nonnegative");
  }
}

}  // namespace model
}  // namespace ctcl
