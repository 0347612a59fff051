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

#ifndef CTCL_PIPELINE_PIPELINE_H_
#define CTCL_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/dp/mechanisms.h"
#include "ctcl/dp/rdp.h"
#include "ctcl/embedding.h"
#include "ctcl/model/config.h"
#include "ctcl/model/parameters.h"
#include "ctcl/pipeline/aspects.h"
#include "ctcl/topics.h"

namespace ctcl {
namespace pipeline {

// One (condition, target) training pair in token form.
struct TrainingPair {
  TokenSequence condition;
  TokenSequence target;
};

struct TrainStats {
  std::vector<double> step_losses;  // mean batch loss per step (diagnostic)
};

// Shared Adam training loop: per-example gradients, L2 clipping, Gaussian
// aggregation noise (noise_multiplier == 0 and an infinite clip norm recover
// plain mini-batch Adam), warmup/linear-decay schedule. Deterministic for a
// fixed seed regardless of the worker-thread count.
TrainStats TrainLoop(const model::ModelConfig& model_config,
                     model::Parameters& params,
                     const std::vector<TrainingPair>& examples,
                     const model::TrainConfig& train_config);

// Builds pretraining pairs (rule-based or service-backed aspect conditions
// paired with the document) and trains with plain Adam. Public data: nothing
// is recorded in any privacy ledger.
struct PretrainResult {
  model::Parameters params;
  TrainStats stats;
  int64_t fallback_count = 0;  // documents where the aspect service failed
};

PretrainResult PretrainGenerator(const Corpus& public_corpus,
                                 const Vocabulary& vocab,
                                 const HashedTfidfEmbedder& embedder,
                                 const model::ModelConfig& model_config,
                                 const model::TrainConfig& train_config,
                                 AspectService* aspect_service = nullptr);

struct FitOptions {
  // Exactly one of target_epsilon / noise_multiplier must be set for private
  // fitting; noise_multiplier = 0 is the explicit non-private limit.
  std::optional<double> target_epsilon;
  std::optional<double> noise_multiplier;
  double histogram_sigma = 10.0;
  std::optional<double> delta;  // default: 1/(N ln N) for the private corpus
  // Ablation switch: condition on assigned topic keywords (the full method)
  // or train without conditions.
  bool keyword_conditions = true;
  std::optional<std::string> doc_type_hint;  // operator domain knowledge
};

struct FitResult {
  model::Parameters params;
  dp::NoisyHistogram histogram;
  dp::AccountantLedger ledger;
  double delta = 0.0;
  double epsilon = 0.0;  // composed, +inf when non-private
  double noise_multiplier = 0.0;
  double sampling_rate = 0.0;
  int64_t pairs = 0;         // documents kept after dropping unclassified
  int64_t unclassified = 0;  // dropped from pairs, kept in the histogram
  TrainStats stats;
};

// Learning the private domain: DP topic histogram release followed by
// DP-Adam finetuning on (topic-keyword condition, document) pairs.
// Unclassified documents stay in the histogram's last bin but are dropped
// from the pairs.
FitResult FitPrivate(const Corpus& private_corpus, const TopicModel& topics,
                     const HashedTfidfEmbedder& embedder,
                     const Vocabulary& vocab,
                     const model::Parameters& init_params,
                     const model::ModelConfig& model_config,
                     const model::TrainConfig& train_config,
                     const FitOptions& options);

// Largest-remainder apportionment of n samples to normalized proportions;
// remainders tie toward the lowest topic id. Counts sum to n exactly.
std::vector<int64_t> AllocateCounts(const std::vector<double>& proportions,
                                    int64_t n);

// Per-topic target counts from a noisy histogram: the unclassified bin is
// dropped and the remaining proportions renormalized before apportionment.
struct SynthesisPlan {
  std::vector<int64_t> counts;  // per real topic
  int64_t total = 0;
};

SynthesisPlan PlanFromHistogram(const dp::NoisyHistogram& histogram,
                                int64_t k, int64_t n);

// Generates `n` documents topic-proportionally from DP-released artifacts
// only (parameters, topic model, noisy histogram) - by construction no
// private corpus can reach this stage.
struct SynthesisResult {
  Corpus corpus;  // provenance = synthetic
  SynthesisPlan plan;
  int64_t empty_retries = 0;   // generations retried for emptiness
  int64_t placeholder_docs = 0;  // still empty after 3 attempts
};

// keyword_conditions = false reproduces the unconditional ablation arm: the
// plan still splits by topic but generations receive an empty condition.
SynthesisResult Synthesize(
    const model::Parameters& dp_params, const model::ModelConfig& model_config,
    const TopicModel& topics, const dp::NoisyHistogram& histogram, int64_t n,
    const model::SamplerConfig& sampler, const Vocabulary& vocab,
    uint64_t seed,
    const std::optional<std::string>& doc_type_hint = std::nullopt,
    bool keyword_conditions = true);

// Jensen-Shannon divergence (natural log) between two discrete
// distributions; 0 for identical, ln 2 for disjoint support.
double JensenShannonDivergence(const std::vector<double>& p,
                               const std::vector<double>& q);

struct EvalReport {
  double next_word_accuracy = 0.0;
  double perplexity = 0.0;
  double topic_js_divergence = 0.0;
  double composed_epsilon = 0.0;  // filled by the caller from the ledger
};

// Trains a fresh downstream causal LM on the synthetic corpus, scores it on
// the real test set, and compares exact (non-noised) topic histograms of the
// two corpora. Evaluation only: no privacy claim is attached.
EvalReport Evaluate(const Corpus& synthetic, const Corpus& real_test,
                    const model::ModelConfig& downstream_config,
                    const model::TrainConfig& downstream_train,
                    const TopicModel& topics,
                    const HashedTfidfEmbedder& embedder,
                    const Vocabulary& vocab);

// Token sequences of a corpus under `vocab` (targets for decoder training).
std::vector<TokenSequence> EncodeCorpus(const Corpus& corpus,
                                        const Vocabulary& vocab,
                                        int64_t max_len);

}  // namespace pipeline
}  // namespace ctcl

#endif  // CTCL_PIPELINE_PIPELINE_H_
