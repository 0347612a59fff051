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

#include "ctcl/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"
#include "ctcl/rng.h"

namespace ctcl {

using nlohmann::json;

namespace {

const char* kSpecialNames[] = {"<pad>", "<bos>", "<eos>", "<unk>", "<sep>"};

std::string TrimWhitespace(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string PaddedLineId(int64_t line) {
  std::ostringstream out;
  out << "doc-";
  std::string digits = std::to_string(line);
  for (size_t i = digits.size(); i < 8; ++i) out << '0';
  out << digits;
  return out.str();
}

json DocumentToJson(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  if (doc.label.has_value()) j["label"] = *doc.label;
  if (doc.true_topic.has_value()) j["true_topic"] = *doc.true_topic;
  return j;
}

}  // namespace

std::string ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kPublic: return "public";
    case Provenance::kPrivate: return "private";
    case Provenance::kSynthetic: return "synthetic";
  }
  throw ConfigError("unknown provenance");
}

Provenance ProvenanceFromName(const std::string& name) {
  if (name == "public") return Provenance::kPublic;
  if (name == "private") return Provenance::kPrivate;
  if (name == "synthetic") return Provenance::kSynthetic;
  throw ConfigError("unknown provenance: " + name);
}

std::vector<std::string> Tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (const char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (int64_t i = 0; i < static_cast<int64_t>(tokens_.size()); ++i) {
    ids_[tokens_[static_cast<size_t>(i)]] = kNumSpecials + i;
  }
  if (static_cast<int64_t>(ids_.size()) != static_cast<int64_t>(tokens_.size())) {
    throw ConfigError("vocabulary contains duplicate tokens");
  }
}

int64_t Vocabulary::id_of(const std::string& token) const {
  const auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int64_t id) const {
  if (id < 0 || id >= size()) {
    throw ConfigError("token id " + std::to_string(id) +
                      " out of range for vocabulary of size " +
                      std::to_string(size()));
  }
  if (id < kNumSpecials) {
    static const std::string specials[] = {
        kSpecialNames[0], kSpecialNames[1], kSpecialNames[2],
        kSpecialNames[3], kSpecialNames[4]};
    return specials[static_cast<size_t>(id)];
  }
  return tokens_[static_cast<size_t>(id - kNumSpecials)];
}

bool Vocabulary::contains(const std::string& token) const {
  return ids_.find(token) != ids_.end();
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open vocabulary file for writing: " + path);
  json j;
  j["tokens"] = tokens_;
  out << j.dump() << "\n";
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open vocabulary file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed vocabulary file " + path + ": " + e.what());
  }
  return Vocabulary(j.at("tokens").get<std::vector<std::string>>());
}

Corpus LoadCorpus(const std::string& path, Provenance provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.provenance = provenance;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimWhitespace(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError("malformed JSON at " + path + ":" +
                        std::to_string(line_number) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      throw ConfigError("missing \"text\" field at " + path + ":" +
                        std::to_string(line_number));
    }
    Document doc;
    doc.text = j["text"].get<std::string>();
    if (TrimWhitespace(doc.text).empty()) {
      throw ConfigError("empty \"text\" at " + path + ":" +
                        std::to_string(line_number));
    }
    doc.id = j.contains("id") ? j["id"].get<std::string>()
                              : PaddedLineId(line_number);
    if (j.contains("label") && !j["label"].is_null()) {
      doc.label = j["label"].get<std::string>();
    }
    if (j.contains("true_topic") && !j["true_topic"].is_null()) {
      doc.true_topic = j["true_topic"].get<int64_t>();
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) {
    throw ConfigError("corpus file has no documents: " + path);
  }
  return corpus;
}

void SaveCorpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open corpus file for writing: " + path);
  for (const Document& doc : corpus.documents) {
    out << DocumentToJson(doc).dump() << "\n";
  }
}

Vocabulary BuildVocabulary(const Corpus& corpus, int64_t max_size,
                           int64_t min_count) {
  if (max_size < Vocabulary::kNumSpecials + 1) {
    throw ConfigError("vocabulary max_size must be at least 6");
  }
  std::map<std::string, int64_t> counts;
  for (const Document& doc : corpus.documents) {
    for (const std::string& token : Tokenize(doc.text)) ++counts[token];
  }
  std::vector<std::pair<std::string, int64_t>> ranked;
  ranked.reserve(counts.size());
  for (const auto& [token, count] : counts) {
    if (count >= min_count) ranked.emplace_back(token, count);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  const int64_t capacity = max_size - Vocabulary::kNumSpecials;
  if (static_cast<int64_t>(ranked.size()) > capacity) {
    ranked.resize(static_cast<size_t>(capacity));
  }
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [token, count] : ranked) tokens.push_back(std::move(token));
  return Vocabulary(std::move(tokens));
}

TokenSequence Encode(const Vocabulary& vocab, const std::string& text,
                     int64_t max_len) {
  if (max_len < 2) throw ConfigError("max_len must allow BOS and EOS");
  TokenSequence seq;
  seq.ids.push_back(Vocabulary::kBos);
  for (const std::string& token : Tokenize(text)) {
    if (static_cast<int64_t>(seq.ids.size()) == max_len - 1) break;
    seq.ids.push_back(vocab.id_of(token));
  }
  seq.ids.push_back(Vocabulary::kEos);
  return seq;
}

std::string Decode(const Vocabulary& vocab, const TokenSequence& sequence) {
  std::string out;
  for (const int64_t id : sequence.ids) {
    if (id < 0 || id >= vocab.size()) {
      throw ConfigError("token id " + std::to_string(id) +
                        " out of range for vocabulary of size " +
                        std::to_string(vocab.size()));
    }
    if (id < Vocabulary::kNumSpecials) continue;
    if (!out.empty()) out.push_back(' ');
    out += vocab.token_of(id);
  }
  return out;
}

ToyCorpusSpec ToyCorpusSpec::FromJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open toy spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed toy spec " + path + ": " + e.what());
  }
  ToyCorpusSpec spec;
  try {
    for (const json& t : j.at("topics")) {
      ToyTopicSpec topic;
      topic.name = t.at("name").get<std::string>();
      topic.word_pool = t.at("pool").get<std::vector<std::string>>();
      topic.weight = t.value("weight", 1.0);
      spec.topics.push_back(std::move(topic));
    }
    spec.num_documents = j.at("docs").get<int64_t>();
    if (j.contains("doc_len")) {
      spec.min_doc_len = j["doc_len"].at(0).get<int64_t>();
      spec.max_doc_len = j["doc_len"].at(1).get<int64_t>();
    }
    if (j.contains("noise_words")) {
      spec.shared_noise_words = j["noise_words"].get<std::vector<std::string>>();
    }
    spec.noise_rate = j.value("noise_rate", spec.noise_rate);
    spec.chain_rate = j.value("chain_rate", spec.chain_rate);
    spec.chain_step = j.value("chain_step", spec.chain_step);
    spec.seed = j.value("seed", static_cast<uint64_t>(0));
  } catch (const json::exception& e) {
    throw ConfigError("invalid toy spec " + path + ": " + e.what());
  }
  return spec;
}

std::string ToyCorpusSpec::ToJson() const {
  json j;
  j["topics"] = json::array();
  for (const ToyTopicSpec& t : topics) {
    j["topics"].push_back({{"name", t.name}, {"pool", t.word_pool},
                           {"weight", t.weight}});
  }
  j["docs"] = num_documents;
  j["doc_len"] = {min_doc_len, max_doc_len};
  j["noise_words"] = shared_noise_words;
  j["noise_rate"] = noise_rate;
  j["chain_rate"] = chain_rate;
  j["chain_step"] = chain_step;
  j["seed"] = seed;
  return j.dump(2);
}

Corpus GenerateToyCorpus(const ToyCorpusSpec& spec, Provenance provenance) {
  if (spec.num_documents <= 0) throw ConfigError("toy spec requests an empty corpus");
  if (spec.topics.empty()) throw ConfigError("toy spec has no topics");
  if (spec.min_doc_len < 1 || spec.max_doc_len < spec.min_doc_len) {
    throw ConfigError("toy spec has an invalid doc_len range");
  }
  if (spec.chain_step < 1) {
    throw ConfigError("toy spec chain_step must be positive");
  }
  double total_weight = 0.0;
  for (const ToyTopicSpec& t : spec.topics) {
    if (t.word_pool.size() < 5) {
      throw ConfigError("toy topic \"" + t.name + "\" needs at least 5 pool words");
    }
    if (!(t.weight > 0.0)) {
      throw ConfigError("toy topic \"" + t.name + "\" needs a positive weight");
    }
    total_weight += t.weight;
  }

  Corpus corpus;
  corpus.provenance = provenance;
  corpus.documents.reserve(static_cast<size_t>(spec.num_documents));
  for (int64_t d = 0; d < spec.num_documents; ++d) {
    const Prng prng(DeriveSeed(spec.seed, rng_stream::kToyCorpus,
                               static_cast<uint64_t>(d)),
                    0);
    uint64_t draw = 0;

    // Topic by weight.
    double u = prng.Uniform(draw++) * total_weight;
    size_t topic = 0;
    for (; topic + 1 < spec.topics.size(); ++topic) {
      u -= spec.topics[topic].weight;
      if (u < 0.0) break;
    }
    const ToyTopicSpec& t = spec.topics[topic];
    const int64_t pool_size = static_cast<int64_t>(t.word_pool.size());

    const int64_t length =
        spec.min_doc_len +
        static_cast<int64_t>(prng.UniformInt(
            draw++, static_cast<uint64_t>(spec.max_doc_len - spec.min_doc_len + 1)));

    // Walk the pool: with chain_rate continue the cycle, otherwise jump;
    // with noise_rate substitute a shared noise word.
    std::vector<std::string> words;
    words.reserve(static_cast<size_t>(length));
    int64_t position = static_cast<int64_t>(
        prng.UniformInt(draw++, static_cast<uint64_t>(pool_size)));
    for (int64_t w = 0; w < length; ++w) {
      if (!spec.shared_noise_words.empty() &&
          prng.Uniform(draw++) < spec.noise_rate) {
        const uint64_t n = prng.UniformInt(
            draw++, static_cast<uint64_t>(spec.shared_noise_words.size()));
        words.push_back(spec.shared_noise_words[static_cast<size_t>(n)]);
        continue;
      }
      if (w > 0) {
        if (prng.Uniform(draw++) < spec.chain_rate) {
          position = (position + spec.chain_step) % pool_size;
        } else {
          position = static_cast<int64_t>(
              prng.UniformInt(draw++, static_cast<uint64_t>(pool_size)));
        }
      }
      words.push_back(t.word_pool[static_cast<size_t>(position)]);
    }

    Document doc;
    doc.id = PaddedLineId(d + 1);
    std::string text;
    for (size_t w = 0; w < words.size(); ++w) {
      if (w > 0) text.push_back(' ');
      text += words[w];
    }
    doc.text = std::move(text);
    doc.label = t.name;
    doc.true_topic = static_cast<int64_t>(topic);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<Corpus> SplitCorpus(const Corpus& corpus,
                                const std::vector<double>& fractions,
                                uint64_t seed) {
  if (fractions.empty()) throw ConfigError("split requires at least one fraction");
  double total = 0.0;
  for (const double f : fractions) {
    if (!(f > 0.0)) throw ConfigError("split fractions must be positive");
    total += f;
  }

  std::vector<int64_t> order(static_cast<size_t>(corpus.size()));
  for (int64_t i = 0; i < corpus.size(); ++i) order[static_cast<size_t>(i)] = i;
  DeterministicShuffle(order, Prng(seed, rng_stream::kSplit));

  const int64_t n = corpus.size();
  std::vector<int64_t> sizes(fractions.size());
  int64_t assigned = 0;
  for (size_t i = 0; i < fractions.size(); ++i) {
    sizes[i] = static_cast<int64_t>(std::floor(fractions[i] / total * n));
    assigned += sizes[i];
  }
  sizes[0] += n - assigned;  // remainder to the first split

  std::vector<Corpus> splits;
  splits.reserve(fractions.size());
  int64_t cursor = 0;
  for (const int64_t size : sizes) {
    Corpus part;
    part.provenance = corpus.provenance;
    part.documents.reserve(static_cast<size_t>(size));
    for (int64_t i = 0; i < size; ++i, ++cursor) {
      part.documents.push_back(
          corpus.documents[static_cast<size_t>(order[static_cast<size_t>(cursor)])]);
    }
    splits.push_back(std::move(part));
  }
  return splits;
}

}  // namespace ctcl
