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

#include "ctcl/embedding.h"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"
#include "ctcl/hash.h"

namespace ctcl {

using nlohmann::json;

double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size()) throw ConfigError("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

HashedTfidfEmbedder::HashedTfidfEmbedder(const Corpus& public_corpus,
                                         EmbedderConfig config)
    : config_(config) {
  if (config_.dimension < 2) throw ConfigError("embedding dimension must be >= 2");
  num_documents_ = public_corpus.size();
  for (const Document& doc : public_corpus.documents) {
    std::set<std::string> seen;
    for (const std::string& token : Tokenize(doc.text)) seen.insert(token);
    for (const std::string& token : seen) ++document_frequency_[token];
  }
}

HashedTfidfEmbedder::HashedTfidfEmbedder(
    EmbedderConfig config, std::map<std::string, int64_t> document_frequency,
    int64_t num_documents)
    : config_(config),
      document_frequency_(std::move(document_frequency)),
      num_documents_(num_documents) {}

double HashedTfidfEmbedder::Idf(const std::string& token) const {
  const auto it = document_frequency_.find(token);
  const int64_t df = it == document_frequency_.end() ? 0 : it->second;
  return std::log((1.0 + static_cast<double>(num_documents_)) /
                  (1.0 + static_cast<double>(df))) +
         1.0;
}

int64_t HashedTfidfEmbedder::Bucket(const std::string& token) const {
  const uint64_t h = Fnv1a64(token, config_.hash_seed);
  return static_cast<int64_t>(h % static_cast<uint64_t>(config_.dimension));
}

double HashedTfidfEmbedder::Sign(const std::string& token) const {
  const uint64_t h = Fnv1a64(token, config_.hash_seed);
  return (h >> 63) ? -1.0 : 1.0;
}

EmbeddingVector HashedTfidfEmbedder::Embed(const std::string& text) const {
  EmbeddingVector v(static_cast<size_t>(config_.dimension), 0.0);
  std::map<std::string, int64_t> tf;
  for (const std::string& token : Tokenize(text)) ++tf[token];
  if (tf.empty()) return v;  // empty document -> zero vector
  for (const auto& [token, count] : tf) {
    v[static_cast<size_t>(Bucket(token))] +=
        static_cast<double>(count) * Idf(token) * Sign(token);
  }
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  if (norm == 0.0) return v;  // colliding signs can cancel exactly
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

void HashedTfidfEmbedder::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open embedder file for writing: " + path);
  json df = json::object();
  for (const auto& [token, count] : document_frequency_) df[token] = count;
  json j{{"dimension", config_.dimension},
         {"hash_seed", config_.hash_seed},
         {"num_documents", num_documents_},
         {"document_frequency", df}};
  out << j.dump() << "\n";
}

HashedTfidfEmbedder HashedTfidfEmbedder::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open embedder file: " + path);
  json j;
  try {
    in >> j;
    EmbedderConfig config;
    config.dimension = j.at("dimension").get<int64_t>();
    config.hash_seed = j.at("hash_seed").get<uint64_t>();
    std::map<std::string, int64_t> df;
    for (const auto& [token, count] : j.at("document_frequency").items()) {
      df[token] = count.get<int64_t>();
    }
    return HashedTfidfEmbedder(config, std::move(df),
                               j.at("num_documents").get<int64_t>());
  } catch (const json::exception& e) {
    throw ConfigError("malformed embedder file " + path + ": " + e.what());
  }
}

}  // namespace ctcl
