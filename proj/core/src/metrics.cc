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

#include "ctcl/model/metrics.h"

#include <cmath>

#include "ctcl/error.h"
#include "ctcl/model/math.h"
#include "ctcl/model/transformer.h"
#include "ctcl/parallel.h"

namespace ctcl {
namespace model {

namespace {

struct ExampleScores {
  int64_t hits = 0;
  int64_t positions = 0;
  double total_ce = 0.0;
};

ExampleScores ScoreExample(const ModelConfig& config, const Parameters& params,
                           const TokenSequence& target) {
  const TokenSequence empty_condition;
  std::vector<int64_t> inputs(target.ids.begin(), target.ids.end() - 1);
  std::vector<int64_t> labels(target.ids.begin() + 1, target.ids.end());
  const std::vector<double> logits =
      DecoderLogits(config, params, empty_condition, inputs);
  const int64_t v = config.vocab_size;
  ExampleScores scores;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int64_t label = labels[i];
    if (label == Vocabulary::kPad) continue;
    const std::span<const double> row(
        logits.data() + static_cast<int64_t>(i) * v, static_cast<size_t>(v));
    int64_t argmax = 0;
    for (int64_t c = 1; c < v; ++c) {
      // Strict > keeps the lowest id on ties.
      if (row[static_cast<size_t>(c)] > row[static_cast<size_t>(argmax)]) {
        argmax = c;
      }
    }
    if (argmax == label) ++scores.hits;
    scores.total_ce += LogSumExpRow(row) - row[static_cast<size_t>(label)];
    ++scores.positions;
  }
  return scores;
}

std::vector<ExampleScores> ScoreDataset(
    const ModelConfig& config, const Parameters& params,
    const std::vector<TokenSequence>& dataset) {
  if (config.mode != ModelConfig::Mode::kDecoderOnly) {
    throw ConfigError("dataset scoring requires decoder_only mode");
  }
  if (dataset.empty()) throw ConfigError("dataset must be non-empty");
  std::vector<ExampleScores> scores(dataset.size());
  ParallelFor(static_cast<int64_t>(dataset.size()), [&](int64_t i) {
    scores[static_cast<size_t>(i)] =
        ScoreExample(config, params, dataset[static_cast<size_t>(i)]);
  });
  return scores;
}

}  // namespace

std::pair<int64_t, int64_t> AccuracyFromLogits(
    const std::vector<double>& logits, int64_t vocab_size,
    const std::vector<int64_t>& labels) {
  int64_t hits = 0;
  int64_t positions = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const int64_t label = labels[i];
    if (label == Vocabulary::kPad) continue;
    const double* row = logits.data() + static_cast<int64_t>(i) * vocab_size;
    int64_t argmax = 0;
    for (int64_t c = 1; c < vocab_size; ++c) {
      if (row[c] > row[argmax]) argmax = c;
    }
    if (argmax == label) ++hits;
    ++positions;
  }
  return {hits, positions};
}

double NextWordAccuracy(const ModelConfig& config, const Parameters& params,
                        const std::vector<TokenSequence>& dataset) {
  const std::vector<ExampleScores> scores = ScoreDataset(config, params, dataset);
  int64_t hits = 0;
  int64_t positions = 0;
  for (const ExampleScores& s : scores) {
    hits += s.hits;
    positions += s.positions;
  }
  if (positions == 0) throw ConfigError("dataset has no scorable positions");
  return static_cast<double>(hits) / static_cast<double>(positions);
}

double Perplexity(const ModelConfig& config, const Parameters& params,
                  const std::vector<TokenSequence>& dataset) {
  const std::vector<ExampleScores> scores = ScoreDataset(config, params, dataset);
  double total_ce = 0.0;
  int64_t positions = 0;
  for (const ExampleScores& s : scores) {
    total_ce += s.total_ce;
    positions += s.positions;
  }
  if (positions == 0) throw ConfigError("dataset has no scorable positions");
  return std::exp(total_ce / static_cast<double>(positions));
}

}  // namespace model
}  // namespace ctcl
