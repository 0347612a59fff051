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

#ifndef CTCL_CORPUS_H_
#define CTCL_CORPUS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ctcl {

enum class Provenance { kPublic, kPrivate, kSynthetic };

std::string ProvenanceName(Provenance p);
Provenance ProvenanceFromName(const std::string& name);

struct Document {
  std::string id;
  std::string text;
  std::optional<std::string> label;
  std::optional<int64_t> true_topic;  // toy corpora only
};

struct Corpus {
  std::vector<Document> documents;
  Provenance provenance = Provenance::kPublic;

  int64_t size() const { return static_cast<int64_t>(documents.size()); }
};

// Lowercased whitespace tokens of `text`.
std::vector<std::string> Tokenize(const std::string& text);

// Word-level vocabulary. Ids 0..4 are reserved for specials; regular tokens
// occupy 5..size-1 ranked by (count desc, token asc).
class Vocabulary {
 public:
  static constexpr int64_t kPad = 0;
  static constexpr int64_t kBos = 1;
  static constexpr int64_t kEos = 2;
  static constexpr int64_t kUnk = 3;
  static constexpr int64_t kSep = 4;
  static constexpr int64_t kNumSpecials = 5;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);  // regular tokens, in id order

  int64_t size() const { return kNumSpecials + static_cast<int64_t>(tokens_.size()); }
  int64_t id_of(const std::string& token) const;  // kUnk if absent
  const std::string& token_of(int64_t id) const;  // throws on id >= size
  bool contains(const std::string& token) const;

  const std::vector<std::string>& regular_tokens() const { return tokens_; }

  void Save(const std::string& path) const;
  static Vocabulary Load(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int64_t> ids_;
};

struct TokenSequence {
  std::vector<int64_t> ids;

  int64_t length() const { return static_cast<int64_t>(ids.size()); }
  bool operator==(const TokenSequence&) const = default;
};

// JSONL ingestion: one object per line with required "text" and optional
// "id", "label", "true_topic". Missing ids become zero-padded line numbers.
Corpus LoadCorpus(const std::string& path, Provenance provenance);

// Writes documents one JSON object per line, keys in fixed order, so that
// load -> save -> load -> save is byte-stable.
void SaveCorpus(const Corpus& corpus, const std::string& path);

// Tokens with count >= min_count, ranked by (count desc, token asc),
// truncated to max_size total ids (specials included). max_size >= 6.
Vocabulary BuildVocabulary(const Corpus& corpus, int64_t max_size,
                           int64_t min_count);

// [BOS, tokens..., EOS], out-of-vocabulary tokens -> UNK, truncated to
// max_len ids with EOS always last.
TokenSequence Encode(const Vocabulary& vocab, const std::string& text,
                     int64_t max_len);

// Drops special ids, joins with single spaces. Throws on id >= vocab size.
std::string Decode(const Vocabulary& vocab, const TokenSequence& sequence);

struct ToyTopicSpec {
  std::string name;
  std::vector<std::string> word_pool;  // at least 5 words
  double weight = 1.0;
};

struct ToyCorpusSpec {
  std::vector<ToyTopicSpec> topics;
  int64_t num_documents = 0;
  int64_t min_doc_len = 8;
  int64_t max_doc_len = 16;
  // Tokens occasionally mixed into every topic's documents.
  std::vector<std::string> shared_noise_words;
  double noise_rate = 0.05;
  // Probability that a word continues its pool's cycle instead of being drawn
  // uniformly; gives documents learnable local structure.
  double chain_rate = 0.8;
  // Cycle stride: the word following pool[i] is pool[(i + chain_step) % n].
  // Distinct strides give corpora over the same pools different transition
  // structure (a controllable domain shift).
  int64_t chain_step = 1;
  uint64_t seed = 0;

  static ToyCorpusSpec FromJsonFile(const std::string& path);
  std::string ToJson() const;
};

// Deterministic synthetic corpus with known topic structure: every document
// draws one topic by weight and walks that topic's word pool.
Corpus GenerateToyCorpus(const ToyCorpusSpec& spec, Provenance provenance);

// Deterministic shuffle followed by contiguous split. Sizes are the floor
// allocation with the remainder assigned to the first split.
std::vector<Corpus> SplitCorpus(const Corpus& corpus,
                                const std::vector<double>& fractions,
                                uint64_t seed);

}  // namespace ctcl

#endif  // CTCL_CORPUS_H_
