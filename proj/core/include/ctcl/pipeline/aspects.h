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

#ifndef CTCL_PIPELINE_ASPECTS_H_
#define CTCL_PIPELINE_ASPECTS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctcl/corpus.h"
#include "ctcl/embedding.h"

namespace ctcl {
namespace pipeline {

// Free-form description of one document: keywords, a coarse document type,
// and optional extra "Label: value" aspect lines.
struct AspectSet {
  std::vector<std::string> keywords;
  std::string doc_type;
  std::vector<std::pair<std::string, std::string>> extra;
};

// External document-description service. POST /extract {"text": ...} must
// answer 200 {"text": "...Keywords: .../Document Type: ..."}.
class AspectService {
 public:
  virtual ~AspectService() = default;
  virtual std::optional<std::string> Describe(const std::string& text) = 0;
};

class HttpAspectService : public AspectService {
 public:
  explicit HttpAspectService(std::string base_url,
                             double timeout_seconds = 5.0);
  std::optional<std::string> Describe(const std::string& text) override;

 private:
  std::string base_url_;
  double timeout_seconds_;
};

// Parses "Keywords:" / "Document Type:" lines out of a service response.
// Requires at least the keywords line; other "Label: value" lines are kept
// as extra aspects.
std::optional<AspectSet> ParseAspectDescription(const std::string& text);

struct ExtractedAspects {
  AspectSet aspects;
  bool used_fallback = false;  // service missing, failed, or unparseable
};

// Rule-based extractor (top-5 tf-idf keywords, punctuation/turn-marker
// document type), optionally replaced by the external service with the
// rule-based path as a guaranteed fallback.
ExtractedAspects ExtractAspects(const std::string& text,
                                const HashedTfidfEmbedder& embedder,
                                AspectService* service = nullptr);

// Heuristic document type: "dialogue" when two or more lines open with a
// turn marker ("A:"), "list" when two or more lines open with a bullet or
// enumerator, otherwise "article".
std::string ClassifyDocType(const std::string& text);

enum class ConditionMode { kPretrain, kFinetune };

// The rendered condition string, one "Label: value" line per aspect.
struct ConditionText {
  std::vector<std::pair<std::string, std::string>> lines;

  std::string Render() const;  // lines joined with '\n'
};

// Pretrain conditions render every aspect (Document Type first, then
// Keywords, then extras). Finetune conditions render exactly the assigned
// topic's keyword line, preceded by a Document Type line only when operator
// domain knowledge supplies one.
ConditionText BuildCondition(
    const AspectSet& aspects, ConditionMode mode,
    const std::vector<std::string>& topic_keywords = {},
    const std::optional<std::string>& doc_type_hint = std::nullopt);

// Token form fed to the encoder: [BOS, line tokens..., SEP, line tokens...,
// EOS], aspect labels dropped, truncated to max_len with EOS last.
TokenSequence EncodeCondition(const Vocabulary& vocab,
                              const ConditionText& condition, int64_t max_len);

}  // namespace pipeline
}  // namespace ctcl

#endif  // CTCL_PIPELINE_ASPECTS_H_
