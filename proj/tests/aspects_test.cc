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

#include "ctcl/pipeline/aspects.h"

#include <atomic>
#include <thread>

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace pipeline {
namespace {

Corpus BackgroundCorpus() {
  Corpus corpus;
  corpus.documents.push_back({"1", "cat dog runs fast", {}, {}});
  corpus.documents.push_back({"2", "dog walks home", {}, {}});
  corpus.documents.push_back({"3", "bird sings loud", {}, {}});
  return corpus;
}

TEST_CASE("rule-based keywords lead with the dominant token") {
  const HashedTfidfEmbedder embedder(BackgroundCorpus(),
                                     EmbedderConfig{64, 0});
  const ExtractedAspects extracted =
      ExtractAspects("cat cat dog runs", embedder);
  REQUIRE(!extracted.aspects.keywords.empty());
  CHECK(extracted.aspects.keywords[0] == "cat");
  CHECK(!extracted.used_fallback);
  CHECK(extracted.aspects.keywords.size() <= 5);
}

TEST_CASE("turn markers on two lines classify as dialogue") {
  CHECK(ClassifyDocType("A: hello there\nB: hi, how are you") == "dialogue");
  CHECK(ClassifyDocType("A: single turn only") == "article");
  CHECK(ClassifyDocType("- first item\n- second item") == "list");
  CHECK(ClassifyDocType("1. first\n2) second") == "list");
  CHECK(ClassifyDocType("plain prose with no markers") == "article");
}

TEST_CASE("empty documents still produce an aspect set") {
  const HashedTfidfEmbedder embedder(BackgroundCorpus(),
                                     EmbedderConfig{64, 0});
  const ExtractedAspects extracted = ExtractAspects("", embedder);
  CHECK(extracted.aspects.keywords.empty());
  CHECK(extracted.aspects.doc_type == "article");
}

TEST_CASE("description parser reads keyword and type lines") {
  const std::optional<AspectSet> parsed = ParseAspectDescription(
      "Tone: informative\n"
      "Keywords: West Virginia, Golf, Recruiting\n"
      "Document Type: Article, Sports News\n");
  REQUIRE(parsed.has_value());
  CHECK(parsed->keywords ==
        std::vector<std::string>{"west virginia", "golf", "recruiting"});
  CHECK(parsed->doc_type == "article, sports news");
  REQUIRE(parsed->extra.size() == 1);
  CHECK(parsed->extra[0].first == "Tone");
}

TEST_CASE("descriptions without the required lines fail to parse") {
  CHECK(!ParseAspectDescription("free text with no labels").has_value());
  CHECK(!ParseAspectDescription("Keywords: a, b\n").has_value());  // no type
  CHECK(!ParseAspectDescription("Document Type: article\n").has_value());
}

TEST_CASE("service path is used when it answers well-formed text") {
  httplib::Server server;
  server.Post("/extract", [](const httplib::Request& req,
                             httplib::Response& res) {
    const nlohmann::json body = nlohmann::json::parse(req.body);
    REQUIRE(body.contains("text"));
    res.set_content(
        nlohmann::json{
            {"text", "Keywords: service, keywords\nDocument Type: memo"}}
            .dump(),
        "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&]() { server.listen_after_bind(); });
  server.wait_until_ready();

  const HashedTfidfEmbedder embedder(BackgroundCorpus(),
                                     EmbedderConfig{64, 0});
  HttpAspectService service("http://127.0.0.1:" + std::to_string(port));
  const ExtractedAspects extracted =
      ExtractAspects("any document text", embedder, &service);
  CHECK(!extracted.used_fallback);
  CHECK(extracted.aspects.keywords ==
        std::vector<std::string>{"service", "keywords"});
  CHECK(extracted.aspects.doc_type == "memo");

  server.stop();
  server_thread.join();
}

TEST_CASE("malformed service responses fall back to the rule-based path") {
  httplib::Server server;
  std::atomic<int> calls{0};
  server.Post("/extract", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.set_content("{\"text\": \"no labeled lines here at all\"}",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&]() { server.listen_after_bind(); });
  server.wait_until_ready();

  const HashedTfidfEmbedder embedder(BackgroundCorpus(),
                                     EmbedderConfig{64, 0});
  HttpAspectService service("http://127.0.0.1:" + std::to_string(port));
  const ExtractedAspects extracted =
      ExtractAspects("cat cat dog", embedder, &service);
  CHECK(calls.load() == 1);
  CHECK(extracted.used_fallback);  // flagged for the run manifest
  REQUIRE(!extracted.aspects.keywords.empty());
  CHECK(extracted.aspects.keywords[0] == "cat");

  server.stop();
  server_thread.join();
}

TEST_CASE("unreachable services fall back as well") {
  const HashedTfidfEmbedder embedder(BackgroundCorpus(),
                                     EmbedderConfig{64, 0});
  HttpAspectService service("http://127.0.0.1:1", 0.2);  // nothing listens
  const ExtractedAspects extracted =
      ExtractAspects("cat cat dog", embedder, &service);
  CHECK(extracted.used_fallback);
  CHECK(!extracted.aspects.keywords.empty());
}

TEST_CASE("finetune conditions are exactly one keyword line") {
  const std::vector<std::string> keywords = {"a", "b", "c", "d", "e",
                                             "f", "g", "h", "i", "j"};
  const ConditionText condition =
      BuildCondition(AspectSet{}, ConditionMode::kFinetune, keywords);
  REQUIRE(condition.lines.size() == 1);
  CHECK(condition.lines[0].first == "Keywords");
  CHECK(condition.Render() == "Keywords: a, b, c, d, e, f, g, h, i, j");
}

TEST_CASE("finetune conditions can carry a document type hint") {
  const ConditionText condition = BuildCondition(
      AspectSet{}, ConditionMode::kFinetune, {"x", "y"}, "dialogue");
  REQUIRE(condition.lines.size() == 2);
  CHECK(condition.lines[0].first == "Document Type");
  CHECK(condition.lines[1].first == "Keywords");
}

TEST_CASE("finetune mode requires topic keywords") {
  CHECK_THROWS_AS(BuildCondition(AspectSet{}, ConditionMode::kFinetune, {}),
                  ConfigError);
}

TEST_CASE("pretrain conditions put Document Type first in stable order") {
  AspectSet aspects;
  aspects.keywords = {"cat", "dog"};
  aspects.doc_type = "article";
  const ConditionText condition =
      BuildCondition(aspects, ConditionMode::kPretrain);
  REQUIRE(condition.lines.size() == 2);
  CHECK(condition.lines[0].first == "Document Type");
  CHECK(condition.lines[1].first == "Keywords");
  CHECK(condition.Render() == "Document Type: article\nKeywords: cat, dog");
}

TEST_CASE("ten single-token keywords re-tokenize within a small max_len") {
  Corpus corpus;
  corpus.documents.push_back(
      {"1", "k0 k1 k2 k3 k4 k5 k6 k7 k8 k9 filler words", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 64, 1);
  std::vector<std::string> keywords;
  for (int i = 0; i < 10; ++i) keywords.push_back("k" + std::to_string(i));
  const ConditionText condition =
      BuildCondition(AspectSet{}, ConditionMode::kFinetune, keywords);
  const TokenSequence seq = EncodeCondition(vocab, condition, 16);
  // Length check: BOS + 10 keywords + EOS = 12 <= 16, all in-vocabulary.
  CHECK(seq.length() == 12);
  for (size_t i = 1; i + 1 < seq.ids.size(); ++i) {
    CHECK(seq.ids[i] != Vocabulary::kUnk);
  }
}

TEST_CASE("multi-line conditions encode with SEP separators") {
  Corpus corpus;
  corpus.documents.push_back({"1", "alpha beta article", {}, {}});
  const Vocabulary vocab = BuildVocabulary(corpus, 64, 1);
  AspectSet aspects;
  aspects.keywords = {"alpha", "beta"};
  aspects.doc_type = "article";
  const TokenSequence seq = EncodeCondition(
      vocab, BuildCondition(aspects, ConditionMode::kPretrain), 16);
  // [BOS, article, SEP, alpha, beta, EOS]
  REQUIRE(seq.length() == 6);
  CHECK(seq.ids[0] == Vocabulary::kBos);
  CHECK(seq.ids[2] == Vocabulary::kSep);
  CHECK(seq.ids[5] == Vocabulary::kEos);
}

}  // namespace
}  // namespace pipeline
}  // namespace ctcl
