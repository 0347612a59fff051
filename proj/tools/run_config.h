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

#ifndef CTCL_TOOLS_RUN_CONFIG_H_
#define CTCL_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "ctcl/model/config.h"

namespace ctcl {
namespace tools {

// One JSON config drives every pipeline stage; CLI flags override fields.
// The effective config (after overrides) is echoed into each manifest.
struct RunConfig {
  uint64_t seed = 0;

  struct Paths {
    std::string public_corpus;
    std::string private_corpus;
    std::string real_test;
    std::string vocab;
    std::string embedder;
    std::string topic_model;
    std::string pretrained_checkpoint;
    std::string fitted_checkpoint;
    std::string synthetic_corpus;
    std::string manifest_dir = ".";
  } paths;

  struct VocabConfig {
    int64_t max_size = 4096;
    int64_t min_count = 1;
  } vocab;

  struct TopicsConfig {
    int64_t k = 8;
    double tau = 0.05;
    int64_t dimension = 256;
    int64_t stop_top_n = 25;
  } topics;

  model::ModelConfig model;             // generator
  model::ModelConfig downstream_model;  // evaluation LM (decoder_only)

  model::TrainConfig pretrain;
  model::TrainConfig finetune;
  model::TrainConfig downstream_train;

  struct DpConfig {
    std::optional<double> target_epsilon = 4.0;
    std::optional<double> noise_multiplier;
    double histogram_sigma = 10.0;
    std::optional<double> delta;  // default 1/(N ln N)
  } dp;

  model::SamplerConfig sampler;

  struct SynthesisConfig {
    int64_t size = 1000;
    std::optional<std::string> doc_type_hint;
  } synthesis;

  struct AblationConfig {
    bool keyword_conditions = true;
    bool from_scratch = false;
  } ablation;

  std::optional<std::string> aspect_service_url;

  // Canonical JSON of the effective config (threads excluded: the worker
  // count must not influence any output byte).
  std::string ToJson() const;

  static RunConfig FromJsonFile(const std::string& path);
  static RunConfig FromJson(const std::string& json_text);
};

}  // namespace tools
}  // namespace ctcl

#endif  // CTCL_TOOLS_RUN_CONFIG_H_
