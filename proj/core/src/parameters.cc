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

#include "ctcl/model/parameters.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ctcl/error.h"
#include "ctcl/rng.h"

namespace ctcl {
namespace model {

namespace {

constexpr char kMagic[8] = {'C', 'T', 'C', 'L', 'C', 'K', 'P', 'T'};
constexpr uint32_t kCheckpointVersion = 1;

struct TensorSpec {
  std::string name;
  std::vector<int64_t> dims;
};

void AppendAttention(std::vector<TensorSpec>& specs, const std::string& prefix,
                     int64_t d) {
  for (const char* w : {"wq", "wk", "wv", "wo"}) {
    specs.push_back({prefix + "." + w, {d, d}});
  }
  for (const char* b : {"bq", "bk", "bv", "bo"}) {
    specs.push_back({prefix + "." + b, {d}});
  }
}

void AppendLayerNorm(std::vector<TensorSpec>& specs, const std::string& prefix,
                     int64_t d) {
  specs.push_back({prefix + ".gain", {d}});
  specs.push_back({prefix + ".bias", {d}});
}

void AppendFfn(std::vector<TensorSpec>& specs, const std::string& prefix,
               int64_t d, int64_t f) {
  specs.push_back({prefix + ".w1", {d, f}});
  specs.push_back({prefix + ".b1", {f}});
  specs.push_back({prefix + ".w2", {f, d}});
  specs.push_back({prefix + ".b2", {d}});
}

std::vector<TensorSpec> LayoutFor(const ModelConfig& config) {
  config.Validate();
  const int64_t d = config.d_model;
  const int64_t f = config.ffn_dim;
  std::vector<TensorSpec> specs;
  specs.push_back({"embed.token", {config.vocab_size, d}});
  specs.push_back({"embed.pos_dec", {config.max_len, d}});
  if (config.mode == ModelConfig::Mode::kEncoderDecoder) {
    specs.push_back({"embed.pos_enc", {config.max_len, d}});
    for (int64_t layer = 0; layer < config.n_layers; ++layer) {
      const std::string prefix = "enc." + std::to_string(layer);
      AppendLayerNorm(specs, prefix + ".ln1", d);
      AppendAttention(specs, prefix + ".attn", d);
      AppendLayerNorm(specs, prefix + ".ln2", d);
      AppendFfn(specs, prefix + ".ffn", d, f);
    }
    AppendLayerNorm(specs, "enc.final_ln", d);
  }
  for (int64_t layer = 0; layer < config.n_layers; ++layer) {
    const std::string prefix = "dec." + std::to_string(layer);
    AppendLayerNorm(specs, prefix + ".ln1", d);
    AppendAttention(specs, prefix + ".self_attn", d);
    if (config.mode == ModelConfig::Mode::kEncoderDecoder) {
      AppendLayerNorm(specs, prefix + ".ln_cross", d);
      AppendAttention(specs, prefix + ".cross_attn", d);
    }
    AppendLayerNorm(specs, prefix + ".ln2", d);
    AppendFfn(specs, prefix + ".ffn", d, f);
  }
  AppendLayerNorm(specs, "dec.final_ln", d);
  specs.push_back({"out.w", {d, config.vocab_size}});
  specs.push_back({"out.b", {config.vocab_size}});

  std::sort(specs.begin(), specs.end(),
            [](const TensorSpec& a, const TensorSpec& b) {
              return a.name < b.name;
            });
  return specs;
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T>
void WriteRaw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadRaw(std::ifstream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("truncated checkpoint file: " + path);
  return value;
}

}  // namespace

Parameters Parameters::Zeros(const ModelConfig& config) {
  Parameters params;
  int64_t offset = 0;
  for (const TensorSpec& spec : LayoutFor(config)) {
    TensorInfo info;
    info.name = spec.name;
    info.dims = spec.dims;
    info.offset = offset;
    info.size = 1;
    for (const int64_t dim : spec.dims) info.size *= dim;
    offset += info.size;
    params.tensors_.push_back(std::move(info));
  }
  params.values_.assign(static_cast<size_t>(offset), 0.0);
  return params;
}

std::span<double> Parameters::tensor(const std::string& name) {
  const TensorInfo& i = info(name);
  return std::span<double>(values_).subspan(static_cast<size_t>(i.offset),
                                            static_cast<size_t>(i.size));
}

std::span<const double> Parameters::tensor(const std::string& name) const {
  const TensorInfo& i = info(name);
  return std::span<const double>(values_).subspan(
      static_cast<size_t>(i.offset), static_cast<size_t>(i.size));
}

const TensorInfo& Parameters::info(const std::string& name) const {
  const auto it = std::lower_bound(
      tensors_.begin(), tensors_.end(), name,
      [](const TensorInfo& t, const std::string& n) { return t.name < n; });
  if (it == tensors_.end() || it->name != name) {
    throw ConfigError("unknown parameter tensor: " + name);
  }
  return *it;
}

bool Parameters::has(const std::string& name) const {
  const auto it = std::lower_bound(
      tensors_.begin(), tensors_.end(), name,
      [](const TensorInfo& t, const std::string& n) { return t.name < n; });
  return it != tensors_.end() && it->name == name;
}

Parameters InitParameters(const ModelConfig& config) {
  Parameters params = Parameters::Zeros(config);
  uint64_t tensor_index = 0;
  for (const TensorInfo& info : params.tensors()) {
    std::span<double> data = params.tensor(info.name);
    const Prng prng(DeriveSeed(config.seed, rng_stream::kModelInit,
                               tensor_index),
                    0);
    ++tensor_index;
    if (EndsWith(info.name, ".gain")) {
      std::fill(data.begin(), data.end(), 1.0);
      continue;
    }
    if (info.dims.size() == 1) continue;  // biases stay zero
    // Embedding rows act as d_model-sized features; matmul weights scale by
    // their input dimension.
    const int64_t fan_in = info.name.rfind("embed.", 0) == 0
                               ? config.d_model
                               : info.dims.front();
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (size_t i = 0; i < data.size(); ++i) {
      data[i] = bound * (2.0 * prng.Uniform(i) - 1.0);
    }
  }
  return params;
}

int64_t ParameterCount(const ModelConfig& config) {
  int64_t total = 0;
  for (const TensorSpec& spec : LayoutFor(config)) {
    int64_t size = 1;
    for (const int64_t dim : spec.dims) size *= dim;
    total += size;
  }
  return total;
}

void SaveCheckpoint(const Parameters& params, const ModelConfig& config,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  WriteRaw(out, kCheckpointVersion);
  const std::string config_json = config.ToJson();
  WriteRaw(out, static_cast<uint32_t>(config_json.size()));
  out.write(config_json.data(),
            static_cast<std::streamsize>(config_json.size()));
  for (const TensorInfo& info : params.tensors()) {
    WriteRaw(out, static_cast<uint32_t>(info.name.size()));
    out.write(info.name.data(), static_cast<std::streamsize>(info.name.size()));
    WriteRaw(out, static_cast<uint32_t>(info.dims.size()));
    for (const int64_t dim : info.dims) {
      WriteRaw(out, static_cast<uint64_t>(dim));
    }
    const std::span<const double> data = params.tensor(info.name);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
  }
  if (!out) throw ConfigError("failed writing checkpoint: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError("not a checkpoint file (bad magic): " + path);
  }
  const uint32_t version = ReadRaw<uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw ConfigError("unsupported checkpoint version " +
                      std::to_string(version) + ": " + path);
  }
  const uint32_t config_len = ReadRaw<uint32_t>(in, path);
  std::string config_json(config_len, '\0');
  in.read(config_json.data(), config_len);
  if (!in) throw ConfigError("truncated checkpoint file: " + path);

  Checkpoint ckpt;
  ckpt.config = ModelConfig::FromJson(config_json);
  ckpt.params = Parameters::Zeros(ckpt.config);
  for (const TensorInfo& info : ckpt.params.tensors()) {
    const uint32_t name_len = ReadRaw<uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw ConfigError("truncated checkpoint file: " + path);
    if (name != info.name) {
      throw ConfigError("checkpoint tensor order mismatch at \"" + name +
                        "\": " + path);
    }
    const uint32_t rank = ReadRaw<uint32_t>(in, path);
    if (rank != info.dims.size()) {
      throw ConfigError("checkpoint tensor rank mismatch at \"" + name +
                        "\": " + path);
    }
    for (const int64_t expected : info.dims) {
      const uint64_t dim = ReadRaw<uint64_t>(in, path);
      if (static_cast<int64_t>(dim) != expected) {
        throw ConfigError("checkpoint tensor shape mismatch at \"" + name +
                          "\": " + path);
      }
    }
    const std::span<double> data = ckpt.params.tensor(info.name);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!in) throw ConfigError("truncated checkpoint file: " + path);
  }
  return ckpt;
}

}  // namespace model
}  // namespace ctcl
