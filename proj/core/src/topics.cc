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

#include "ctcl/topics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"
#include "ctcl/parallel.h"
#include "ctcl/rng.h"

namespace ctcl {

using nlohmann::json;

namespace {

thread_local std::vector<double> t_last_fit_objectives;

void NormalizeInPlace(EmbeddingVector& v) {
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  if (norm == 0.0) return;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
}

bool IsZero(const EmbeddingVector& v) {
  for (const double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

// Assignment under fixed centroids: argmax cosine, ties to lowest id.
int64_t NearestCentroid(const EmbeddingVector& x,
                        const std::vector<EmbeddingVector>& centroids,
                        double* best_similarity) {
  int64_t best = 0;
  double best_sim = -2.0;
  for (int64_t c = 0; c < static_cast<int64_t>(centroids.size()); ++c) {
    const double sim = CosineSimilarity(x, centroids[static_cast<size_t>(c)]);
    if (sim > best_sim) {
      best_sim = sim;
      best = c;
    }
  }
  if (best_similarity != nullptr) *best_similarity = best_sim;
  return best;
}

}  // namespace

void TopicModel::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open topic model file for writing: " + path);
  json j{{"dimension", dimension},
         {"k", k},
         {"tau", tau},
         {"centroids", centroids},
         {"keywords", keywords}};
  json warn = json::array();
  for (const bool w : empty_topic_warning) warn.push_back(w);
  j["empty_topic_warning"] = warn;
  out << j.dump() << "\n";
}

TopicModel TopicModel::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open topic model file: " + path);
  json j;
  TopicModel model;
  try {
    in >> j;
    model.dimension = j.at("dimension").get<int64_t>();
    model.k = j.at("k").get<int64_t>();
    model.tau = j.at("tau").get<double>();
    model.centroids = j.at("centroids").get<std::vector<EmbeddingVector>>();
    model.keywords =
        j.at("keywords").get<std::vector<std::vector<std::string>>>();
    if (j.contains("empty_topic_warning")) {
      for (const json& w : j["empty_topic_warning"]) {
        model.empty_topic_warning.push_back(w.get<bool>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("malformed topic model file " + path + ": " + e.what());
  }
  if (model.k < 1 ||
      static_cast<int64_t>(model.centroids.size()) != model.k) {
    throw ConfigError("topic model file is inconsistent: " + path);
  }
  return model;
}

std::vector<std::string> MostFrequentTokens(const Corpus& corpus,
                                            int64_t top_n) {
  if (top_n <= 0) return {};
  std::map<std::string, int64_t> counts;
  for (const Document& doc : corpus.documents) {
    for (const std::string& token : Tokenize(doc.text)) ++counts[token];
  }
  std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(),
                                                      counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int64_t>(ranked.size()) > top_n) {
    ranked.resize(static_cast<size_t>(top_n));
  }
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(std::move(token));
  return tokens;
}

std::vector<std::vector<std::string>> ExtractKeywords(
    const Corpus& corpus, const std::vector<int64_t>& assignments, int64_t k,
    const std::vector<std::string>& stop_tokens,
    std::vector<bool>* empty_topic_warning) {
  if (static_cast<int64_t>(assignments.size()) != corpus.size()) {
    throw ConfigError("assignments do not match corpus size");
  }
  const std::set<std::string> stops(stop_tokens.begin(), stop_tokens.end());

  // Per-cluster and total term counts over classified documents only.
  std::vector<std::map<std::string, int64_t>> cluster_tf(
      static_cast<size_t>(k));
  std::map<std::string, int64_t> total_tf;
  int64_t total_tokens = 0;
  for (int64_t i = 0; i < corpus.size(); ++i) {
    const int64_t c = assignments[static_cast<size_t>(i)];
    if (c == kUnclassified) continue;
    if (c < 0 || c >= k) throw ConfigError("assignment out of range");
    for (const std::string& token :
         Tokenize(corpus.documents[static_cast<size_t>(i)].text)) {
      ++cluster_tf[static_cast<size_t>(c)][token];
      ++total_tf[token];
      ++total_tokens;
    }
  }
  const double avg_tokens_per_cluster =
      static_cast<double>(total_tokens) / static_cast<double>(k);

  std::vector<std::vector<std::string>> keywords(static_cast<size_t>(k));
  if (empty_topic_warning != nullptr) {
    empty_topic_warning->assign(static_cast<size_t>(k), false);
  }
  for (int64_t c = 0; c < k; ++c) {
    const auto& tf = cluster_tf[static_cast<size_t>(c)];
    if (tf.empty()) {
      if (empty_topic_warning != nullptr) {
        (*empty_topic_warning)[static_cast<size_t>(c)] = true;
      }
      continue;
    }
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(tf.size());
    for (const auto& [token, count] : tf) {
      if (stops.count(token) > 0) continue;
      const double score =
          static_cast<double>(count) *
          std::log(1.0 + avg_tokens_per_cluster /
                             static_cast<double>(total_tf.at(token)));
      scored.emplace_back(score, token);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const size_t take =
        std::min<size_t>(scored.size(), static_cast<size_t>(kKeywordsPerTopic));
    for (size_t i = 0; i < take; ++i) {
      keywords[static_cast<size_t>(c)].push_back(scored[i].second);
    }
  }
  return keywords;
}

TopicModel FitTopics(const Corpus& corpus, int64_t k,
                     const DocumentEmbedder& embedder, uint64_t seed,
                     const TopicFitOptions& options) {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (corpus.size() < k) {
    throw ConfigError("corpus smaller than the requested number of topics");
  }

  // Embed everything; zero vectors are excluded from fitting.
  std::vector<EmbeddingVector> embeddings(
      static_cast<size_t>(corpus.size()));
  ParallelFor(corpus.size(), [&](int64_t i) {
    embeddings[static_cast<size_t>(i)] =
        embedder.Embed(corpus.documents[static_cast<size_t>(i)].text);
  });
  std::vector<int64_t> doc_index;  // fitting row -> corpus row
  std::vector<const EmbeddingVector*> points;
  for (int64_t i = 0; i < corpus.size(); ++i) {
    if (!IsZero(embeddings[static_cast<size_t>(i)])) {
      doc_index.push_back(i);
      points.push_back(&embeddings[static_cast<size_t>(i)]);
    }
  }
  const int64_t m = static_cast<int64_t>(points.size());
  if (m < k) {
    throw ConfigError("fewer nonzero document embeddings (" +
                      std::to_string(m) + ") than topics (" +
                      std::to_string(k) + ")");
  }

  // k-means++ seeding under cosine distance 1 - cos.
  const Prng prng(seed, rng_stream::kKmeansInit);
  uint64_t draw = 0;
  std::vector<EmbeddingVector> centroids;
  centroids.reserve(static_cast<size_t>(k));
  centroids.push_back(*points[prng.UniformInt(draw++, static_cast<uint64_t>(m))]);
  std::vector<double> min_distance(static_cast<size_t>(m), 2.0);
  while (static_cast<int64_t>(centroids.size()) < k) {
    const EmbeddingVector& latest = centroids.back();
    double total = 0.0;
    for (int64_t i = 0; i < m; ++i) {
      const double d =
          1.0 - CosineSimilarity(*points[static_cast<size_t>(i)], latest);
      min_distance[static_cast<size_t>(i)] =
          std::min(min_distance[static_cast<size_t>(i)], d);
      total += min_distance[static_cast<size_t>(i)];
    }
    int64_t pick = 0;
    if (total > 0.0) {
      double u = prng.Uniform(draw++) * total;
      for (; pick + 1 < m; ++pick) {
        u -= min_distance[static_cast<size_t>(pick)];
        if (u < 0.0) break;
      }
    } else {
      pick = static_cast<int64_t>(
          prng.UniformInt(draw++, static_cast<uint64_t>(m)));
    }
    centroids.push_back(*points[static_cast<size_t>(pick)]);
  }

  // Lloyd iterations.
  t_last_fit_objectives.clear();
  std::vector<int64_t> assignment(static_cast<size_t>(m), -1);
  std::vector<double> similarity(static_cast<size_t>(m), 0.0);
  for (int64_t iteration = 0; iteration < options.max_iterations; ++iteration) {
    ParallelFor(m, [&](int64_t i) {
      double sim = 0.0;
      assignment[static_cast<size_t>(i)] =
          NearestCentroid(*points[static_cast<size_t>(i)], centroids, &sim);
      similarity[static_cast<size_t>(i)] = sim;
    });

    double objective = 0.0;
    for (int64_t i = 0; i < m; ++i) {
      objective += 1.0 - similarity[static_cast<size_t>(i)];
    }
    t_last_fit_objectives.push_back(objective);

    // Update step: normalized mean per cluster; an empty cluster is reseeded
    // to the point with the worst similarity to its centroid.
    std::vector<EmbeddingVector> sums(
        static_cast<size_t>(k),
        EmbeddingVector(static_cast<size_t>(embedder.dimension()), 0.0));
    std::vector<int64_t> sizes(static_cast<size_t>(k), 0);
    for (int64_t i = 0; i < m; ++i) {
      const int64_t c = assignment[static_cast<size_t>(i)];
      const EmbeddingVector& x = *points[static_cast<size_t>(i)];
      for (size_t d = 0; d < x.size(); ++d) {
        sums[static_cast<size_t>(c)][d] += x[d];
      }
      ++sizes[static_cast<size_t>(c)];
    }
    std::vector<EmbeddingVector> next = centroids;
    for (int64_t c = 0; c < k; ++c) {
      if (sizes[static_cast<size_t>(c)] > 0 &&
          !IsZero(sums[static_cast<size_t>(c)])) {
        next[static_cast<size_t>(c)] = sums[static_cast<size_t>(c)];
        NormalizeInPlace(next[static_cast<size_t>(c)]);
      } else {
        int64_t worst = 0;
        double worst_sim = 2.0;
        for (int64_t i = 0; i < m; ++i) {
          if (similarity[static_cast<size_t>(i)] < worst_sim) {
            worst_sim = similarity[static_cast<size_t>(i)];
            worst = i;
          }
        }
        next[static_cast<size_t>(c)] = *points[static_cast<size_t>(worst)];
      }
    }

    // Convergence check: next assignment identical under updated centroids.
    std::vector<int64_t> probe(static_cast<size_t>(m));
    ParallelFor(m, [&](int64_t i) {
      probe[static_cast<size_t>(i)] =
          NearestCentroid(*points[static_cast<size_t>(i)], next, nullptr);
    });
    centroids = std::move(next);
    if (probe == assignment) break;
  }

  TopicModel model;
  model.dimension = embedder.dimension();
  model.k = k;
  model.tau = options.tau;
  model.centroids = std::move(centroids);

  // Keywords from the final assignment, mapped back to corpus rows.
  std::vector<int64_t> corpus_assignment(
      static_cast<size_t>(corpus.size()), kUnclassified);
  for (int64_t i = 0; i < m; ++i) {
    corpus_assignment[static_cast<size_t>(doc_index[static_cast<size_t>(i)])] =
        assignment[static_cast<size_t>(i)];
  }
  const std::vector<std::string> stops =
      MostFrequentTokens(corpus, options.stop_top_n);
  model.keywords = ExtractKeywords(corpus, corpus_assignment, k, stops,
                                   &model.empty_topic_warning);
  return model;
}

const std::vector<double>& LastFitObjectives() { return t_last_fit_objectives; }

TopicAssignment AssignTopic(const TopicModel& model, const std::string& text,
                            const DocumentEmbedder& embedder) {
  const EmbeddingVector v = embedder.Embed(text);
  if (IsZero(v)) return TopicAssignment{kUnclassified, 0.0};
  TopicAssignment out;
  out.topic_id = NearestCentroid(v, model.centroids, &out.similarity);
  if (out.similarity < model.tau) out.topic_id = kUnclassified;
  return out;
}

std::vector<int64_t> AssignCorpus(const TopicModel& model,
                                  const Corpus& corpus,
                                  const DocumentEmbedder& embedder) {
  std::vector<int64_t> assignments(static_cast<size_t>(corpus.size()),
                                   kUnclassified);
  ParallelFor(corpus.size(), [&](int64_t i) {
    assignments[static_cast<size_t>(i)] =
        AssignTopic(model, corpus.documents[static_cast<size_t>(i)].text,
                    embedder)
            .topic_id;
  });
  return assignments;
}

std::vector<int64_t> RawTopicHistogram(const TopicModel& model,
                                       const Corpus& corpus,
                                       const DocumentEmbedder& embedder) {
  std::vector<int64_t> counts(static_cast<size_t>(model.k) + 1, 0);
  const std::vector<int64_t> assignments = AssignCorpus(model, corpus, embedder);
  for (const int64_t a : assignments) {
    ++counts[a == kUnclassified ? static_cast<size_t>(model.k)
                                : static_cast<size_t>(a)];
  }
  return counts;
}

}  // namespace ctcl
