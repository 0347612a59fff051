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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <doctest.h>

#include "ctcl/error.h"

namespace ctcl {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ToyCorpusSpec TwoTopicSpec(int64_t docs, double w0, double w1, uint64_t seed) {
  ToyCorpusSpec spec;
  ToyTopicSpec a;
  a.name = "a";
  for (int i = 0; i < 8; ++i) a.word_pool.push_back("apple" + std::to_string(i));
  a.weight = w0;
  ToyTopicSpec b;
  b.name = "b";
  for (int i = 0; i < 8; ++i) b.word_pool.push_back("brick" + std::to_string(i));
  b.weight = w1;
  spec.topics = {a, b};
  spec.num_documents = docs;
  spec.min_doc_len = 8;
  spec.max_doc_len = 12;
  spec.seed = seed;
  return spec;
}

TEST_CASE("load ingests documents in file order") {
  const std::string path = TempPath("ctcl_corpus_load.jsonl");
  WriteFile(path, "{\"text\":\"a b\"}\n{\"text\":\"c\"}\n");
  const Corpus corpus = LoadCorpus(path, Provenance::kPublic);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.documents[0].text == "a b");
  CHECK(corpus.documents[1].text == "c");
  CHECK(corpus.documents[0].id == "doc-00000001");
  std::filesystem::remove(path);
}

TEST_CASE("load rejects empty text with the line number") {
  const std::string path = TempPath("ctcl_corpus_empty.jsonl");
  WriteFile(path, "{\"text\":\"ok\"}\n{\"text\":\"  \"}\n");
  CHECK_THROWS_WITH_AS(LoadCorpus(path, Provenance::kPublic),
                       doctest::Contains(":2"), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("load rejects malformed JSON and empty files") {
  const std::string path = TempPath("ctcl_corpus_bad.jsonl");
  WriteFile(path, "{\"text\":\"ok\"}\nnot json\n");
  CHECK_THROWS_WITH_AS(LoadCorpus(path, Provenance::kPublic),
                       doctest::Contains(":2"), ConfigError);
  WriteFile(path, "");
  CHECK_THROWS_AS(LoadCorpus(path, Provenance::kPublic), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("save-load-save is byte-identical") {
  const std::string path1 = TempPath("ctcl_corpus_rt1.jsonl");
  const std::string path2 = TempPath("ctcl_corpus_rt2.jsonl");
  WriteFile(path1,
            "{\"text\":\"a b c\",\"label\":\"x\"}\n"
            "{\"text\":\"d e\",\"id\":\"my-id\"}\n"
            "{\"text\":\"f\",\"true_topic\":1}\n");
  const Corpus first = LoadCorpus(path1, Provenance::kPublic);
  SaveCorpus(first, path2);
  const Corpus second = LoadCorpus(path2, Provenance::kPublic);
  const std::string path3 = TempPath("ctcl_corpus_rt3.jsonl");
  SaveCorpus(second, path3);
  CHECK(ReadFile(path2) == ReadFile(path3));
  std::filesystem::remove(path1);
  std::filesystem::remove(path2);
  std::filesystem::remove(path3);
}

TEST_CASE("vocabulary ranks by count then token") {
  Corpus corpus;
  corpus.documents.push_back({"1", "a a b", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 100, 1);
  CHECK(vocab.id_of("a") == 5);
  CHECK(vocab.id_of("b") == 6);
  CHECK(vocab.size() == 7);
}

TEST_CASE("vocabulary tie-break is lexicographic") {
  Corpus corpus;
  corpus.documents.push_back({"1", "b a", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 100, 1);
  CHECK(vocab.id_of("a") == 5);
  CHECK(vocab.id_of("b") == 6);
}

TEST_CASE("min_count drops rare tokens; UNK on encode") {
  Corpus corpus;
  corpus.documents.push_back({"1", "a a b", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 100, 2);
  CHECK(vocab.contains("a"));
  CHECK(!vocab.contains("b"));
  // Hand-checked encode: [BOS, a, a, UNK, EOS].
  const TokenSequence seq = Encode(vocab, "a a b", 16);
  CHECK(seq.ids == std::vector<int64_t>{Vocabulary::kBos, 5, 5,
                                        Vocabulary::kUnk, Vocabulary::kEos});
}

TEST_CASE("vocabulary truncates to max_size") {
  Corpus corpus;
  corpus.documents.push_back({"1", "a a a b b c", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 7, 1);
  CHECK(vocab.size() == 7);
  CHECK(vocab.contains("a"));
  CHECK(vocab.contains("b"));
  CHECK(!vocab.contains("c"));
  CHECK_THROWS_AS(BuildVocabulary(corpus, 5, 1), ConfigError);
}

TEST_CASE("encode wraps with BOS/EOS and decode round-trips") {
  Corpus corpus;
  corpus.documents.push_back({"1", "a b", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 100, 1);
  const TokenSequence seq = Encode(vocab, "a b", 16);
  CHECK(seq.ids == std::vector<int64_t>{Vocabulary::kBos, vocab.id_of("a"),
                                        vocab.id_of("b"), Vocabulary::kEos});
  CHECK(Decode(vocab, seq) == "a b");
}

TEST_CASE("encode truncates to max_len with EOS last") {
  Corpus corpus;
  std::string text;
  for (int i = 0; i < 600; ++i) text += "w" + std::to_string(i % 50) + " ";
  corpus.documents.push_back({"1", text, {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 1000, 1);
  const TokenSequence seq = Encode(vocab, text, 512);
  // Position count: BOS + 510 tokens + EOS = 512.
  CHECK(seq.length() == 512);
  CHECK(seq.ids.front() == Vocabulary::kBos);
  CHECK(seq.ids.back() == Vocabulary::kEos);
}

TEST_CASE("decode rejects out-of-range ids") {
  Corpus corpus;
  corpus.documents.push_back({"1", "a", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 100, 1);
  TokenSequence seq;
  seq.ids = {vocab.size()};
  CHECK_THROWS_AS(Decode(vocab, seq), ConfigError);
}

TEST_CASE("toy corpus topic counts follow the mixture binomially") {
  const ToyCorpusSpec spec = TwoTopicSpec(1000, 0.7, 0.3, 99);
  const Corpus corpus = GenerateToyCorpus(spec, Provenance::kPrivate);
  int64_t topic0 = 0;
  for (const Document& doc : corpus.documents) {
    REQUIRE(doc.true_topic.has_value());
    if (*doc.true_topic == 0) ++topic0;
  }
  // Binomial(1000, 0.7): mean 700, sigma = sqrt(1000 * 0.7 * 0.3) = 14.49.
  const double sigma = std::sqrt(1000 * 0.7 * 0.3);
  CHECK(std::fabs(static_cast<double>(topic0) - 700.0) <= 3.0 * sigma);
}

TEST_CASE("toy corpus is a pure function of spec and seed") {
  const ToyCorpusSpec spec = TwoTopicSpec(50, 1.0, 1.0, 7);
  const Corpus a = GenerateToyCorpus(spec, Provenance::kPublic);
  const Corpus b = GenerateToyCorpus(spec, Provenance::kPublic);
  REQUIRE(a.size() == b.size());
  for (int64_t i = 0; i < a.size(); ++i) {
    CHECK(a.documents[static_cast<size_t>(i)].text ==
          b.documents[static_cast<size_t>(i)].text);
  }
  ToyCorpusSpec other = spec;
  other.seed = 8;
  const Corpus c = GenerateToyCorpus(other, Provenance::kPublic);
  bool any_differs = false;
  for (int64_t i = 0; i < a.size(); ++i) {
    any_differs |= a.documents[static_cast<size_t>(i)].text !=
                   c.documents[static_cast<size_t>(i)].text;
  }
  CHECK(any_differs);
}

TEST_CASE("toy corpus honors an exact doc_len range") {
  ToyCorpusSpec spec = TwoTopicSpec(40, 1.0, 1.0, 3);
  spec.min_doc_len = 8;
  spec.max_doc_len = 8;
  const Corpus corpus = GenerateToyCorpus(spec, Provenance::kPublic);
  for (const Document& doc : corpus.documents) {
    CHECK(Tokenize(doc.text).size() == 8);
  }
}

TEST_CASE("toy corpus rejects invalid specs") {
  ToyCorpusSpec spec = TwoTopicSpec(0, 1.0, 1.0, 3);
  CHECK_THROWS_AS(GenerateToyCorpus(spec, Provenance::kPublic), ConfigError);
  spec = TwoTopicSpec(10, 1.0, 1.0, 3);
  spec.topics[0].word_pool.resize(4);
  CHECK_THROWS_AS(GenerateToyCorpus(spec, Provenance::kPublic), ConfigError);
}

TEST_CASE("split uses floor allocation, remainder to the first split") {
  const ToyCorpusSpec spec = TwoTopicSpec(10, 1.0, 1.0, 4);
  const Corpus corpus = GenerateToyCorpus(spec, Provenance::kPublic);
  const std::vector<Corpus> splits = SplitCorpus(corpus, {0.8, 0.2}, 1);
  REQUIRE(splits.size() == 2);
  CHECK(splits[0].size() == 8);
  CHECK(splits[1].size() == 2);

  const ToyCorpusSpec spec7 = TwoTopicSpec(7, 1.0, 1.0, 4);
  const Corpus seven = GenerateToyCorpus(spec7, Provenance::kPublic);
  // floor(3.5) = 3 per split, remainder 1 goes first: 4 and 3.
  const std::vector<Corpus> halves = SplitCorpus(seven, {0.5, 0.5}, 1);
  CHECK(halves[0].size() == 4);
  CHECK(halves[1].size() == 3);
}

TEST_CASE("split partitions the corpus without loss or duplication") {
  const ToyCorpusSpec spec = TwoTopicSpec(53, 1.0, 1.0, 5);
  const Corpus corpus = GenerateToyCorpus(spec, Provenance::kPublic);
  const std::vector<Corpus> splits = SplitCorpus(corpus, {0.6, 0.25, 0.15}, 9);
  std::multiset<std::string> original;
  for (const Document& doc : corpus.documents) original.insert(doc.id);
  std::multiset<std::string> recombined;
  int64_t total = 0;
  for (const Corpus& part : splits) {
    total += part.size();
    for (const Document& doc : part.documents) recombined.insert(doc.id);
  }
  CHECK(total == corpus.size());
  CHECK(original == recombined);
}

}  // namespace
}  // namespace ctcl
