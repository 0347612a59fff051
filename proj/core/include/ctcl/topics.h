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

#ifndef CTCL_TOPICS_H_
#define CTCL_TOPICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/embedding.h"

namespace ctcl {

inline constexpr int64_t kUnclassified = -1;
inline constexpr int64_t kKeywordsPerTopic = 10;

struct TopicAssignment {
  int64_t topic_id = kUnclassified;  // in [0, K) or kUnclassified
  double similarity = 0.0;
};

struct TopicModel {
  int64_t dimension = 0;
  int64_t k = 0;
  double tau = 0.05;  // cosine cutoff for the unclassified bin
  std::vector<EmbeddingVector> centroids;      // K unit vectors
  std::vector<std::vector<std::string>> keywords;  // K lists, each <= 10 tokens
  std::vector<bool> empty_topic_warning;       // per-topic: no documents at fit

  void Save(const std::string& path) const;
  static TopicModel Load(const std::string& path);
};

struct TopicFitOptions {
  double tau = 0.05;
  int64_t max_iterations = 100;
  // Tokens among the `stop_top_n` most frequent in the fitting corpus are
  // excluded from keyword lists.
  int64_t stop_top_n = 25;
};

// Spherical k-means over the nonzero document embeddings: k-means++ seeding,
// Lloyd iterations under cosine similarity, centroids renormalized each
// round, stop on unchanged assignment or `max_iterations`. The objective
// sum(1 - cos) is non-increasing across iterations.
TopicModel FitTopics(const Corpus& corpus, int64_t k,
                     const DocumentEmbedder& embedder, uint64_t seed,
                     const TopicFitOptions& options = {});

// Per-iteration objective values of the last FitTopics call on this thread;
// exposed for the monotonicity property test.
const std::vector<double>& LastFitObjectives();

// Class-based TF-IDF keywords: score(t, c) = tf(t, c) * ln(1 + A / f(t))
// where f(t) is the token's total count over all clusters and A the average
// token count per cluster. Top tokens per topic by (score desc, token asc),
// stop tokens excluded, at most kKeywordsPerTopic each.
std::vector<std::vector<std::string>> ExtractKeywords(
    const Corpus& corpus, const std::vector<int64_t>& assignments, int64_t k,
    const std::vector<std::string>& stop_tokens,
    std::vector<bool>* empty_topic_warning = nullptr);

// The `top_n` most frequent tokens of the corpus (count desc, token asc).
std::vector<std::string> MostFrequentTokens(const Corpus& corpus,
                                            int64_t top_n);

// Closest centroid by cosine, ties to the lowest topic id; unclassified when
// the best similarity is below tau or the embedding is zero.
TopicAssignment AssignTopic(const TopicModel& model, const std::string& text,
                            const DocumentEmbedder& embedder);

// counts[k] = documents assigned to topic k, counts[K] = unclassified.
// Assignment runs in parallel over documents.
std::vector<int64_t> RawTopicHistogram(const TopicModel& model,
                                       const Corpus& corpus,
                                       const DocumentEmbedder& embedder);

// Topic assignments for every document (kUnclassified allowed), parallel.
std::vector<int64_t> AssignCorpus(const TopicModel& model,
                                  const Corpus& corpus,
                                  const DocumentEmbedder& embedder);

}  // namespace ctcl

#endif  // CTCL_TOPICS_H_
