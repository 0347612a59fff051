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

#ifndef CTCL_MODEL_SAMPLER_H_
#define CTCL_MODEL_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/model/config.h"
#include "ctcl/model/parameters.h"

namespace ctcl {
namespace model {

// The minimal set of token ids whose probabilities sum to at least top_p,
// ordered by (probability desc, id asc). Probabilities must sum to ~1.
std::vector<int64_t> NucleusSet(const std::vector<double>& probabilities,
                                double top_p);

// Autoregressive nucleus sampling: temperature-scaled softmax, minimal top-p
// prefix, renormalize, draw keyed by (seed, position). Stops at EOS or
// max_new_tokens. Returns [BOS, generated..., EOS?].
TokenSequence Generate(const ModelConfig& config, const Parameters& params,
                       const TokenSequence& condition,
                       const SamplerConfig& sampler, uint64_t seed);

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_SAMPLER_H_
