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

#ifndef CTCL_MODEL_METRICS_H_
#define CTCL_MODEL_METRICS_H_

#include <cstdint>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/model/config.h"
#include "ctcl/model/parameters.h"

namespace ctcl {
namespace model {

// Teacher-forced argmax accuracy of one example given its logits rows
// (ties by lowest token id). PAD labels are skipped. Returns (hits, positions).
std::pair<int64_t, int64_t> AccuracyFromLogits(
    const std::vector<double>& logits, int64_t vocab_size,
    const std::vector<int64_t>& labels);

// Fraction of non-PAD next-token positions predicted exactly, pooled over
// all positions of the dataset. Requires decoder_only mode.
double NextWordAccuracy(const ModelConfig& config, const Parameters& params,
                        const std::vector<TokenSequence>& dataset);

// exp(mean token cross-entropy over all non-PAD positions of the dataset).
double Perplexity(const ModelConfig& config, const Parameters& params,
                  const std::vector<TokenSequence>& dataset);

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_METRICS_H_
