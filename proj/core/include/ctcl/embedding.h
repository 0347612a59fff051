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

#ifndef CTCL_EMBEDDING_H_
#define CTCL_EMBEDDING_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctcl/corpus.h"

namespace ctcl {

// A document embedding vector: all-zero for an empty document, otherwise
// L2-normalized.
using EmbeddingVector = std::vector<double>;

double CosineSimilarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct EmbedderConfig {
  int64_t dimension = 256;
  uint64_t hash_seed = 0;
};

// Interface so a learned embedder can replace the hashed one.
class DocumentEmbedder {
 public:
  virtual ~DocumentEmbedder() = default;
  virtual int64_t dimension() const = 0;
  virtual EmbeddingVector Embed(const std::string& text) const = 0;
};

// Hashed TF-IDF embedding: every token is hashed to one of `dimension`
// buckets with a deterministic sign, weighted tf * idf, then L2-normalized.
// The idf table comes from the public corpus the embedder was fitted on.
class HashedTfidfEmbedder : public DocumentEmbedder {
 public:
  HashedTfidfEmbedder(const Corpus& public_corpus, EmbedderConfig config);

  int64_t dimension() const override { return config_.dimension; }
  EmbeddingVector Embed(const std::string& text) const override;

  // idf of a token; tokens unseen in the fitting corpus get the maximal idf.
  double Idf(const std::string& token) const;

  int64_t Bucket(const std::string& token) const;
  double Sign(const std::string& token) const;

  const EmbedderConfig& config() const { return config_; }

  void Save(const std::string& path) const;
  static HashedTfidfEmbedder Load(const std::string& path);

 private:
  HashedTfidfEmbedder(EmbedderConfig config,
                      std::map<std::string, int64_t> document_frequency,
                      int64_t num_documents);

  EmbedderConfig config_;
  std::map<std::string, int64_t> document_frequency_;
  int64_t num_documents_ = 0;
};

}  // namespace ctcl

#endif  // CTCL_EMBEDDING_H_
