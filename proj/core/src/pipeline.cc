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

#include "ctcl/pipeline/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ctcl/dp/adam.h"
#include "ctcl/dp/gaussian.h"
#include "ctcl/error.h"
#include "ctcl/model/metrics.h"
#include "ctcl/model/sampler.h"
#include "ctcl/model/transformer.h"
#include "ctcl/parallel.h"
#include "ctcl/rng.h"

namespace ctcl {
namespace pipeline {

namespace {

constexpr int64_t kGradChunk = 8;
constexpr int64_t kEmptyGenerationRetries = 3;

// Zero-padded synthetic document id.
std::string SyntheticId(int64_t index) {
  std::string digits = std::to_string(index);
  std::string out = "syn-";
  for (size_t i = digits.size(); i < 8; ++i) out.push_back('0');
  out += digits;
  return out;
}

}  // namespace

TrainStats TrainLoop(const model::ModelConfig& model_config,
                     model::Parameters& params,
                     const std::vector<TrainingPair>& examples,
                     const model::TrainConfig& train_config) {
  model_config.Validate();
  train_config.Validate();
  const int64_t n = static_cast<int64_t>(examples.size());
  if (n == 0) throw ConfigError("training requires a non-empty dataset");
  if (train_config.batch_size > n) {
    throw ConfigError("batch size " + std::to_string(train_config.batch_size) +
                      " exceeds dataset size " + std::to_string(n));
  }
  if (params.size() != model::ParameterCount(model_config)) {
    throw ConfigError("parameters do not match the model config");
  }
  const bool private_mode = train_config.noise_multiplier > 0.0;
  const double clip =
      private_mode || std::isfinite(train_config.clip_norm)
          ? train_config.clip_norm
          : std::numeric_limits<double>::infinity();

  dp::AdamConfig adam;
  adam.weight_decay = train_config.weight_decay;
  dp::AdamState state(params.size());
  const dp::LrSchedule schedule{train_config.peak_lr, train_config.warmup,
                                train_config.steps};

  TrainStats stats;
  stats.step_losses.reserve(static_cast<size_t>(train_config.steps));
  const int64_t batch = train_config.batch_size;
  for (int64_t step = 1; step <= train_config.steps; ++step) {
    const std::vector<int64_t> indices = SampleWithoutReplacement(
        Prng(DeriveSeed(train_config.seed, rng_stream::kBatchSampling,
                        static_cast<uint64_t>(step)),
             0),
        n, batch);

    dp::DpGradientAccumulator accumulator(
        params.size(), batch, clip, train_config.noise_multiplier,
        train_config.seed, step, kGradChunk);
    std::vector<double> losses(static_cast<size_t>(batch), 0.0);
    // Chunk size matches the accumulator so one worker owns each chunk and
    // fills it in ascending order.
    ParallelFor(
        batch,
        [&](int64_t i) {
          const TrainingPair& example =
              examples[static_cast<size_t>(indices[static_cast<size_t>(i)])];
          double loss = 0.0;
          const std::vector<double> grad = model::PerExampleGradient(
              model_config, params, example.condition, example.target, &loss);
          losses[static_cast<size_t>(i)] = loss;
          accumulator.Add(i, grad);
        },
        kGradChunk);
    const std::vector<double> gradient = accumulator.Finalize();

    double mean_loss = 0.0;
    for (const double l : losses) mean_loss += l;
    mean_loss /= static_cast<double>(batch);
    stats.step_losses.push_back(mean_loss);

    dp::AdamStep(params.flat(), gradient, state, adam, schedule.At(step));
  }
  return stats;
}

std::vector<TokenSequence> EncodeCorpus(const Corpus& corpus,
                                        const Vocabulary& vocab,
                                        int64_t max_len) {
  std::vector<TokenSequence> out(static_cast<size_t>(corpus.size()));
  ParallelFor(corpus.size(), [&](int64_t i) {
    out[static_cast<size_t>(i)] =
        Encode(vocab, corpus.documents[static_cast<size_t>(i)].text, max_len);
  });
  return out;
}

PretrainResult PretrainGenerator(const Corpus& public_corpus,
                                 const Vocabulary& vocab,
                                 const HashedTfidfEmbedder& embedder,
                                 const model::ModelConfig& model_config,
                                 const model::TrainConfig& train_config,
                                 AspectService* aspect_service) {
  if (public_corpus.size() == 0) {
    throw ConfigError("pretraining requires a non-empty public corpus");
  }
  std::vector<TrainingPair> pairs(static_cast<size_t>(public_corpus.size()));
  std::vector<uint8_t> fallback(static_cast<size_t>(public_corpus.size()), 0);
  // The aspect service is serial (shared connection); the rule-based path is
  // pure and can run parallel.
  const auto build_pair = [&](int64_t i) {
    const Document& doc = public_corpus.documents[static_cast<size_t>(i)];
    const ExtractedAspects extracted =
        ExtractAspects(doc.text, embedder, aspect_service);
    fallback[static_cast<size_t>(i)] = extracted.used_fallback ? 1 : 0;
    TrainingPair pair;
    pair.condition = EncodeCondition(
        vocab, BuildCondition(extracted.aspects, ConditionMode::kPretrain),
        model_config.max_len);
    pair.target = Encode(vocab, doc.text, model_config.max_len);
    pairs[static_cast<size_t>(i)] = std::move(pair);
  };
  if (aspect_service == nullptr) {
    ParallelFor(public_corpus.size(), build_pair);
  } else {
    for (int64_t i = 0; i < public_corpus.size(); ++i) build_pair(i);
  }

  PretrainResult result;
  result.params = model::InitParameters(model_config);
  model::TrainConfig plain = train_config;
  plain.noise_multiplier = 0.0;
  plain.clip_norm = std::numeric_limits<double>::infinity();
  result.stats = TrainLoop(model_config, result.params, pairs, plain);
  for (const uint8_t f : fallback) result.fallback_count += f;
  return result;
}

FitResult FitPrivate(const Corpus& private_corpus, const TopicModel& topics,
                     const HashedTfidfEmbedder& embedder,
                     const Vocabulary& vocab,
                     const model::Parameters& init_params,
                     const model::ModelConfig& model_config,
                     const model::TrainConfig& train_config,
                     const FitOptions& options) {
  if (private_corpus.size() == 0) {
    throw ConfigError("private corpus is empty");
  }
  if (options.target_epsilon.has_value() ==
      options.noise_multiplier.has_value()) {
    throw ConfigError(
        "exactly one of target_epsilon / noise_multiplier must be set");
  }

  FitResult result;

  // Step 1: DP topic histogram.
  const std::vector<int64_t> assignments =
      AssignCorpus(topics, private_corpus, embedder);
  std::vector<int64_t> raw(static_cast<size_t>(topics.k) + 1, 0);
  for (const int64_t a : assignments) {
    ++raw[a == kUnclassified ? static_cast<size_t>(topics.k)
                             : static_cast<size_t>(a)];
  }
  result.histogram =
      dp::NoiseHistogram(raw, options.histogram_sigma, train_config.seed);

  // Step 2: (condition, document) pairs; unclassified documents are dropped
  // from training but stay in the histogram's last bin.
  std::vector<TrainingPair> pairs;
  pairs.reserve(static_cast<size_t>(private_corpus.size()));
  const TokenSequence empty_condition =
      EncodeCondition(vocab, ConditionText{}, model_config.max_len);
  for (int64_t i = 0; i < private_corpus.size(); ++i) {
    const int64_t topic = assignments[static_cast<size_t>(i)];
    if (topic == kUnclassified) {
      ++result.unclassified;
      continue;
    }
    TrainingPair pair;
    if (options.keyword_conditions) {
      pair.condition = EncodeCondition(
          vocab,
          BuildCondition(AspectSet{}, ConditionMode::kFinetune,
                         topics.keywords[static_cast<size_t>(topic)],
                         options.doc_type_hint),
          model_config.max_len);
    } else {
      pair.condition = empty_condition;
    }
    pair.target = Encode(
        vocab, private_corpus.documents[static_cast<size_t>(i)].text,
        model_config.max_len);
    pairs.push_back(std::move(pair));
  }
  result.pairs = static_cast<int64_t>(pairs.size());
  if (result.pairs == 0) {
    throw ConfigError("every private document fell in the unclassified bin");
  }
  if (train_config.batch_size > result.pairs) {
    throw ConfigError("batch size exceeds the number of private pairs");
  }

  // Step 3: privacy parameters.
  result.delta = options.delta.has_value()
                     ? *options.delta
                     : dp::DeltaForDatasetSize(private_corpus.size());
  result.sampling_rate = static_cast<double>(train_config.batch_size) /
                         static_cast<double>(result.pairs);
  result.noise_multiplier =
      options.target_epsilon.has_value()
          ? dp::SolveNoiseMultiplier(*options.target_epsilon, result.delta,
                                     result.sampling_rate, train_config.steps,
                                     options.histogram_sigma)
          : *options.noise_multiplier;

  // Step 4: ledger (histogram release + T subsampled steps).
  result.ledger.RecordGaussian(options.histogram_sigma, 1.0);
  result.ledger.RecordSubsampledGaussian(result.noise_multiplier,
                                         result.sampling_rate,
                                         train_config.steps);
  // Infinite when either mechanism is noiseless.
  result.epsilon = dp::ComposeAndConvert(result.ledger, result.delta);

  // Step 5: DP-Adam.
  result.params = init_params;
  model::TrainConfig dp_train = train_config;
  dp_train.noise_multiplier = result.noise_multiplier;
  result.stats = TrainLoop(model_config, result.params, pairs, dp_train);
  return result;
}

std::vector<int64_t> AllocateCounts(const std::vector<double>& proportions,
                                    int64_t n) {
  if (proportions.empty()) throw ConfigError("no proportions to allocate");
  if (n < 0) throw ConfigError("allocation size must be nonnegative");
  double total = 0.0;
  for (const double p : proportions) {
    if (p < 0.0) throw ConfigError("proportions must be nonnegative");
    total += p;
  }
  if (!(total > 0.0)) throw ConfigError("proportions sum to zero");

  const size_t k = proportions.size();
  std::vector<int64_t> counts(k, 0);
  std::vector<std::pair<double, int64_t>> remainders(k);
  int64_t assigned = 0;
  for (size_t i = 0; i < k; ++i) {
    const double quota = proportions[i] / total * static_cast<double>(n);
    counts[i] = static_cast<int64_t>(std::floor(quota));
    assigned += counts[i];
    remainders[i] = {quota - std::floor(quota), static_cast<int64_t>(i)};
  }
  // Distribute leftover seats by descending fractional part, ties to the
  // lowest topic id.
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (int64_t seat = 0; seat < n - assigned; ++seat) {
    ++counts[static_cast<size_t>(remainders[static_cast<size_t>(seat)].second)];
  }
  return counts;
}

SynthesisPlan PlanFromHistogram(const dp::NoisyHistogram& histogram,
                                int64_t k, int64_t n) {
  if (static_cast<int64_t>(histogram.proportions.size()) != k + 1) {
    throw ConfigError("histogram does not match the topic count");
  }
  std::vector<double> topic_proportions(
      histogram.proportions.begin(), histogram.proportions.begin() + k);
  const double total = std::accumulate(topic_proportions.begin(),
                                       topic_proportions.end(), 0.0);
  SynthesisPlan plan;
  plan.total = n;
  if (total > 0.0) {
    plan.counts = AllocateCounts(topic_proportions, n);
  } else {
    // Everything landed in the unclassified bin: fall back to uniform.
    plan.counts = AllocateCounts(std::vector<double>(static_cast<size_t>(k),
                                                     1.0),
                                 n);
  }
  return plan;
}

SynthesisResult Synthesize(const model::Parameters& dp_params,
                           const model::ModelConfig& model_config,
                           const TopicModel& topics,
                           const dp::NoisyHistogram& histogram, int64_t n,
                           const model::SamplerConfig& sampler,
                           const Vocabulary& vocab, uint64_t seed,
                           const std::optional<std::string>& doc_type_hint,
                           bool keyword_conditions) {
  if (n < 0) throw ConfigError("synthesis size must be nonnegative");
  SynthesisResult result;
  result.corpus.provenance = Provenance::kSynthetic;
  result.plan = PlanFromHistogram(histogram, topics.k, n);
  if (n == 0) return result;

  int64_t doc_number = 0;
  for (int64_t topic = 0; topic < topics.k; ++topic) {
    const int64_t count = result.plan.counts[static_cast<size_t>(topic)];
    if (count == 0) continue;
    const std::vector<std::string>& topic_keywords =
        topics.keywords[static_cast<size_t>(topic)];
    if (keyword_conditions && topic_keywords.empty()) {
      throw ConfigError("topic " + std::to_string(topic) +
                        " has no keywords to condition on");
    }
    const TokenSequence condition =
        keyword_conditions
            ? EncodeCondition(
                  vocab,
                  BuildCondition(AspectSet{}, ConditionMode::kFinetune,
                                 topic_keywords, doc_type_hint),
                  model_config.max_len)
            : EncodeCondition(vocab, ConditionText{}, model_config.max_len);
    const uint64_t topic_seed =
        DeriveSeed(seed, rng_stream::kSynthesis, static_cast<uint64_t>(topic));
    for (int64_t j = 0; j < count; ++j, ++doc_number) {
      std::string text;
      for (int64_t attempt = 0; attempt <= kEmptyGenerationRetries; ++attempt) {
        const uint64_t doc_seed = DeriveSeed(
            topic_seed, static_cast<uint64_t>(j), static_cast<uint64_t>(attempt));
        const TokenSequence generated = model::Generate(
            model_config, dp_params, condition, sampler, doc_seed);
        text = Decode(vocab, generated);
        if (!text.empty()) break;
        if (attempt < kEmptyGenerationRetries) ++result.empty_retries;
      }
      if (text.empty()) {
        text = vocab.token_of(Vocabulary::kUnk);
        ++result.placeholder_docs;
      }
      Document doc;
      doc.id = SyntheticId(doc_number + 1);
      doc.text = std::move(text);
      doc.true_topic = topic;
      result.corpus.documents.push_back(std::move(doc));
    }
  }
  return result;
}

double JensenShannonDivergence(const std::vector<double>& p,
                               const std::vector<double>& q) {
  if (p.size() != q.size()) throw ConfigError("JSD: dimension mismatch");
  double js = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) js += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) js += 0.5 * q[i] * std::log(q[i] / m);
  }
  return js < 0.0 ? 0.0 : js;
}

EvalReport Evaluate(const Corpus& synthetic, const Corpus& real_test,
                    const model::ModelConfig& downstream_config,
                    const model::TrainConfig& downstream_train,
                    const TopicModel& topics,
                    const HashedTfidfEmbedder& embedder,
                    const Vocabulary& vocab) {
  if (synthetic.size() == 0 || real_test.size() == 0) {
    throw ConfigError("evaluation requires non-empty corpora");
  }
  if (downstream_config.mode != model::ModelConfig::Mode::kDecoderOnly) {
    throw ConfigError("downstream evaluation uses a decoder_only model");
  }

  // Fresh downstream model trained from scratch on the synthetic data.
  std::vector<TrainingPair> pairs(static_cast<size_t>(synthetic.size()));
  ParallelFor(synthetic.size(), [&](int64_t i) {
    pairs[static_cast<size_t>(i)].target =
        Encode(vocab, synthetic.documents[static_cast<size_t>(i)].text,
               downstream_config.max_len);
  });
  model::Parameters downstream = model::InitParameters(downstream_config);
  model::TrainConfig plain = downstream_train;
  plain.noise_multiplier = 0.0;
  TrainLoop(downstream_config, downstream, pairs, plain);

  EvalReport report;
  const std::vector<TokenSequence> test_sequences =
      EncodeCorpus(real_test, vocab, downstream_config.max_len);
  report.next_word_accuracy =
      model::NextWordAccuracy(downstream_config, downstream, test_sequences);
  report.perplexity =
      model::Perplexity(downstream_config, downstream, test_sequences);

  // Exact topic distributions (evaluation metric only, not a DP release).
  const auto to_proportions = [&](const Corpus& corpus) {
    const std::vector<int64_t> counts =
        RawTopicHistogram(topics, corpus, embedder);
    std::vector<double> proportions(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) {
      proportions[i] = static_cast<double>(counts[i]) /
                       static_cast<double>(corpus.size());
    }
    return proportions;
  };
  report.topic_js_divergence = JensenShannonDivergence(
      to_proportions(synthetic), to_proportions(real_test));
  return report;
}

}  // namespace pipeline
}  // namespace ctcl
