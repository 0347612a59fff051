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

#include "run_config.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace tools {

using nlohmann::json;

namespace {

json TrainToJson(const model::TrainConfig& t) {
  return json{{"steps", t.steps},
              {"batch_size", t.batch_size},
              {"peak_lr", t.peak_lr},
              {"warmup", t.warmup},
              {"weight_decay", t.weight_decay},
              {"clip_norm", t.clip_norm}};
}

model::TrainConfig TrainFromJson(const json& j, model::TrainConfig base) {
  base.steps = j.value("steps", base.steps);
  base.batch_size = j.value("batch_size", base.batch_size);
  base.peak_lr = j.value("peak_lr", base.peak_lr);
  base.warmup = j.value("warmup", base.warmup);
  base.weight_decay = j.value("weight_decay", base.weight_decay);
  base.clip_norm = j.value("clip_norm", base.clip_norm);
  return base;
}

json ModelToJson(const model::ModelConfig& m) {
  return json{{"mode", m.mode == model::ModelConfig::Mode::kEncoderDecoder
                           ? "encoder_decoder"
                           : "decoder_only"},
              {"d_model", m.d_model},
              {"n_layers", m.n_layers},
              {"n_heads", m.n_heads},
              {"ffn_dim", m.ffn_dim},
              {"max_len", m.max_len}};
}

model::ModelConfig ModelFromJson(const json& j, model::ModelConfig base) {
  if (j.contains("mode")) {
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "encoder_decoder") {
      base.mode = model::ModelConfig::Mode::kEncoderDecoder;
    } else if (mode == "decoder_only") {
      base.mode = model::ModelConfig::Mode::kDecoderOnly;
    } else {
      throw ConfigError("config: unknown model mode " + mode);
    }
  }
  base.d_model = j.value("d_model", base.d_model);
  base.n_layers = j.value("n_layers", base.n_layers);
  base.n_heads = j.value("n_heads", base.n_heads);
  base.ffn_dim = j.value("ffn_dim", base.ffn_dim);
  base.max_len = j.value("max_len", base.max_len);
  return base;
}

template <typename T>
json OptionalToJson(const std::optional<T>& value) {
  if (!value.has_value()) return nullptr;
  return *value;
}

}  // namespace

std::string RunConfig::ToJson() const {
  json j;
  j["seed"] = seed;
  j["paths"] = {{"public_corpus", paths.public_corpus},
                {"private_corpus", paths.private_corpus},
                {"real_test", paths.real_test},
                {"vocab", paths.vocab},
                {"embedder", paths.embedder},
                {"topic_model", paths.topic_model},
                {"pretrained_checkpoint", paths.pretrained_checkpoint},
                {"fitted_checkpoint", paths.fitted_checkpoint},
                {"synthetic_corpus", paths.synthetic_corpus},
                {"manifest_dir", paths.manifest_dir}};
  j["vocab"] = {{"max_size", vocab.max_size}, {"min_count", vocab.min_count}};
  j["topics"] = {{"k", topics.k},
                 {"tau", topics.tau},
                 {"dimension", topics.dimension},
                 {"stop_top_n", topics.stop_top_n}};
  j["model"] = ModelToJson(model);
  j["downstream_model"] = ModelToJson(downstream_model);
  j["pretrain"] = TrainToJson(pretrain);
  j["finetune"] = TrainToJson(finetune);
  j["downstream_train"] = TrainToJson(downstream_train);
  j["dp"] = {{"target_epsilon", OptionalToJson(dp.target_epsilon)},
             {"noise_multiplier", OptionalToJson(dp.noise_multiplier)},
             {"histogram_sigma", dp.histogram_sigma},
             {"delta", OptionalToJson(dp.delta)}};
  j["sampler"] = {{"top_p", sampler.top_p},
                  {"temperature", sampler.temperature},
                  {"max_new_tokens", sampler.max_new_tokens}};
  j["synthesis"] = {{"size", synthesis.size},
                    {"doc_type_hint", OptionalToJson(synthesis.doc_type_hint)}};
  j["ablation"] = {{"keyword_conditions", ablation.keyword_conditions},
                   {"from_scratch", ablation.from_scratch}};
  j["aspect_service_url"] = OptionalToJson(aspect_service_url);
  return j.dump();
}

RunConfig RunConfig::FromJson(const std::string& json_text) {
  RunConfig config;
  config.downstream_model.mode = model::ModelConfig::Mode::kDecoderOnly;
  config.downstream_train.peak_lr = 3e-4;
  config.downstream_train.weight_decay = 0.01;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  try {
    config.seed = j.value("seed", config.seed);
    if (j.contains("paths")) {
      const json& p = j["paths"];
      config.paths.public_corpus = p.value("public_corpus", "");
      config.paths.private_corpus = p.value("private_corpus", "");
      config.paths.real_test = p.value("real_test", "");
      config.paths.vocab = p.value("vocab", "");
      config.paths.embedder = p.value("embedder", "");
      config.paths.topic_model = p.value("topic_model", "");
      config.paths.pretrained_checkpoint = p.value("pretrained_checkpoint", "");
      config.paths.fitted_checkpoint = p.value("fitted_checkpoint", "");
      config.paths.synthetic_corpus = p.value("synthetic_corpus", "");
      config.paths.manifest_dir = p.value("manifest_dir", ".");
    }
    if (j.contains("vocab")) {
      config.vocab.max_size = j["vocab"].value("max_size", config.vocab.max_size);
      config.vocab.min_count = j["vocab"].value("min_count", config.vocab.min_count);
    }
    if (j.contains("topics")) {
      const json& t = j["topics"];
      config.topics.k = t.value("k", config.topics.k);
      config.topics.tau = t.value("tau", config.topics.tau);
      config.topics.dimension = t.value("dimension", config.topics.dimension);
      config.topics.stop_top_n = t.value("stop_top_n", config.topics.stop_top_n);
    }
    if (j.contains("model")) config.model = ModelFromJson(j["model"], config.model);
    if (j.contains("downstream_model")) {
      config.downstream_model =
          ModelFromJson(j["downstream_model"], config.downstream_model);
    }
    if (config.downstream_model.mode !=
        model::ModelConfig::Mode::kDecoderOnly) {
      throw ConfigError("config: downstream_model must be decoder_only");
    }
    if (j.contains("pretrain")) {
      config.pretrain = TrainFromJson(j["pretrain"], config.pretrain);
    }
    if (j.contains("finetune")) {
      config.finetune = TrainFromJson(j["finetune"], config.finetune);
    }
    if (j.contains("downstream_train")) {
      config.downstream_train =
          TrainFromJson(j["downstream_train"], config.downstream_train);
    }
    if (j.contains("dp")) {
      const json& d = j["dp"];
      if (d.contains("target_epsilon")) {
        config.dp.target_epsilon =
            d["target_epsilon"].is_null()
                ? std::nullopt
                : std::optional<double>(d["target_epsilon"].get<double>());
      }
      if (d.contains("noise_multiplier") && !d["noise_multiplier"].is_null()) {
        config.dp.noise_multiplier = d["noise_multiplier"].get<double>();
        // An explicit multiplier displaces the default budget target; a
        // config that sets both explicitly still fails validation at fit.
        if (!d.contains("target_epsilon")) config.dp.target_epsilon.reset();
      }
      config.dp.histogram_sigma =
          d.value("histogram_sigma", config.dp.histogram_sigma);
      if (d.contains("delta") && !d["delta"].is_null()) {
        config.dp.delta = d["delta"].get<double>();
      }
    }
    if (j.contains("sampler")) {
      const json& s = j["sampler"];
      config.sampler.top_p = s.value("top_p", config.sampler.top_p);
      config.sampler.temperature =
          s.value("temperature", config.sampler.temperature);
      config.sampler.max_new_tokens =
          s.value("max_new_tokens", config.sampler.max_new_tokens);
    }
    if (j.contains("synthesis")) {
      config.synthesis.size = j["synthesis"].value("size", config.synthesis.size);
      if (j["synthesis"].contains("doc_type_hint") &&
          !j["synthesis"]["doc_type_hint"].is_null()) {
        config.synthesis.doc_type_hint =
            j["synthesis"]["doc_type_hint"].get<std::string>();
      }
    }
    if (j.contains("ablation")) {
      config.ablation.keyword_conditions = j["ablation"].value(
          "keyword_conditions", config.ablation.keyword_conditions);
      config.ablation.from_scratch =
          j["ablation"].value("from_scratch", config.ablation.from_scratch);
    }
    if (j.contains("aspect_service_url") && !j["aspect_service_url"].is_null()) {
      config.aspect_service_url = j["aspect_service_url"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  return config;
}

RunConfig RunConfig::FromJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open run config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

}  // namespace tools
}  // namespace ctcl
