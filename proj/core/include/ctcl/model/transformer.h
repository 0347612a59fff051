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

#ifndef CTCL_MODEL_TRANSFORMER_H_
#define CTCL_MODEL_TRANSFORMER_H_

#include <cstdint>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/model/config.h"
#include "ctcl/model/parameters.h"

namespace ctcl {
namespace model {

// Pre-norm transformer. In encoder_decoder mode the condition runs through a
// bidirectional encoder and the decoder attends to it through cross
// attention; decoder_only mode ignores the condition entirely.
//
// The decoder input is the BOS-shifted target: for target [BOS, x1..xn, EOS]
// the model reads [BOS, x1..xn] and is scored on [x1..xn, EOS]. Positions
// whose label is PAD do not contribute to the loss.

struct ForwardResult {
  double loss = 0.0;           // mean token cross-entropy over loss positions
  int64_t loss_positions = 0;  // 0 for an all-PAD target (loss = 0)
  std::vector<double> logits;  // [decoder length x vocab], row-major
};

ForwardResult ForwardLoss(const ModelConfig& config, const Parameters& params,
                          const TokenSequence& condition,
                          const TokenSequence& target);

// Exact reverse-mode gradient of one example's loss, flattened in the
// Parameters layout (lexicographic tensor name, row-major). Optionally
// reports the example's loss.
std::vector<double> PerExampleGradient(const ModelConfig& config,
                                       const Parameters& params,
                                       const TokenSequence& condition,
                                       const TokenSequence& target,
                                       double* loss_out = nullptr);

// Decoder logits for an explicit decoder prefix (generation path);
// rows correspond to prefix positions.
std::vector<double> DecoderLogits(const ModelConfig& config,
                                  const Parameters& params,
                                  const TokenSequence& condition,
                                  const std::vector<int64_t>& decoder_prefix);

}  // namespace model
}  // namespace ctcl

#endif  // CTCL_MODEL_TRANSFORMER_H_
