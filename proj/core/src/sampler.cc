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

#include "ctcl/model/sampler.h"

#include <algorithm>
#include <cmath>

#include "ctcl/error.h"
#include "ctcl/model/math.h"
#include "ctcl/model/transformer.h"
#include "ctcl/rng.h"

namespace ctcl {
namespace model {

std::vector<int64_t> NucleusSet(const std::vector<double>& probabilities,
                                double top_p) {
  if (!(top_p > 0.0) || top_p > 1.0) {
    throw ConfigError("top_p must be in (0, 1]");
  }
  std::vector<int64_t> order(probabilities.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int64_t>(i);
  std::sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
    const double pa = probabilities[static_cast<size_t>(a)];
    const double pb = probabilities[static_cast<size_t>(b)];
    if (pa != pb) return pa > pb;
    return a < b;  // ties by token id ascending
  });
  std::vector<int64_t> nucleus;
  double cumulative = 0.0;
  for (const int64_t id : order) {
    nucleus.push_back(id);
    cumulative += probabilities[static_cast<size_t>(id)];
    if (cumulative >= top_p) break;
  }
  return nucleus;
}

TokenSequence Generate(const ModelConfig& config, const Parameters& params,
                       const TokenSequence& condition,
                       const SamplerConfig& sampler, uint64_t seed) {
  sampler.Validate();
  config.Validate();
  const Prng prng(seed, rng_stream::kSampler);

  TokenSequence out;
  out.ids.push_back(Vocabulary::kBos);
  const int64_t v = config.vocab_size;
  for (int64_t position = 0; position < sampler.max_new_tokens; ++position) {
    if (static_cast<int64_t>(out.ids.size()) >= config.max_len) break;
    const std::vector<double> logits =
        DecoderLogits(config, params, condition, out.ids);
    const int64_t last = static_cast<int64_t>(out.ids.size()) - 1;
    std::vector<double> probs(static_cast<size_t>(v));
    for (int64_t c = 0; c < v; ++c) {
      probs[static_cast<size_t>(c)] =
          logits[static_cast<size_t>(last * v + c)] / sampler.temperature;
    }
    SoftmaxInPlace(probs);

    const std::vector<int64_t> nucleus = NucleusSet(probs, sampler.top_p);
    double mass = 0.0;
    for (const int64_t id : nucleus) mass += probs[static_cast<size_t>(id)];

    // Inverse-cdf draw over the renormalized nucleus.
    const double u = prng.Uniform(static_cast<uint64_t>(position)) * mass;
    double cumulative = 0.0;
    int64_t token = nucleus.back();
    for (const int64_t id : nucleus) {
      cumulative += probs[static_cast<size_t>(id)];
      if (u < cumulative) {
        token = id;
        break;
      }
    }
    out.ids.push_back(token);
    if (token == Vocabulary::kEos) break;
  }
  return out;
}

}  // namespace model
}  // namespace ctcl
