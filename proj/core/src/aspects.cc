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

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace pipeline {

using nlohmann::json;

namespace {

constexpr int64_t kAspectKeywords = 5;

std::string Trim(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::string Lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> SplitCommaList(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  for (const char c : value) {
    if (c == ',') {
      const std::string item = Trim(current);
      if (!item.empty()) items.push_back(Lower(item));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  const std::string item = Trim(current);
  if (!item.empty()) items.push_back(Lower(item));
  return items;
}

bool IsTurnMarkerLine(const std::string& line) {
  const std::string trimmed = Trim(line);
  if (trimmed.empty()) return false;
  const size_t space = trimmed.find_first_of(" \t");
  const std::string head =
      space == std::string::npos ? trimmed : trimmed.substr(0, space);
  // A short speaker tag ending in ':' ("A:", "Alice:", "user:").
  return head.size() >= 2 && head.size() <= 16 && head.back() == ':';
}

bool IsListMarkerLine(const std::string& line) {
  const std::string trimmed = Trim(line);
  if (trimmed.empty()) return false;
  if (trimmed[0] == '-' || trimmed[0] == '*') return true;
  size_t i = 0;
  while (i < trimmed.size() && std::isdigit(static_cast<unsigned char>(trimmed[i]))) ++i;
  return i > 0 && i < trimmed.size() && (trimmed[i] == '.' || trimmed[i] == ')');
}

}  // namespace

std::string ClassifyDocType(const std::string& text) {
  int64_t turns = 0;
  int64_t bullets = 0;
  for (const std::string& line : SplitLines(text)) {
    if (IsTurnMarkerLine(line)) ++turns;
    if (IsListMarkerLine(line)) ++bullets;
  }
  if (turns >= 2) return "dialogue";
  if (bullets >= 2) return "list";
  return "article";
}

HttpAspectService::HttpAspectService(std::string base_url,
                                     double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::optional<std::string> HttpAspectService::Describe(
    const std::string& text) {
  try {
    httplib::Client client(base_url_);
    const auto seconds = static_cast<time_t>(timeout_seconds_);
    const auto microseconds = static_cast<time_t>(
        (timeout_seconds_ - static_cast<double>(seconds)) * 1e6);
    client.set_connection_timeout(seconds, microseconds);
    client.set_read_timeout(seconds, microseconds);
    const json request{{"text", text}};
    const httplib::Result result =
        client.Post("/extract", request.dump(), "application/json");
    if (!result || result->status != 200) return std::nullopt;
    const json response = json::parse(result->body, nullptr, false);
    if (response.is_discarded() || !response.contains("text") ||
        !response["text"].is_string()) {
      return std::nullopt;
    }
    return response["text"].get<std::string>();
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<AspectSet> ParseAspectDescription(const std::string& text) {
  AspectSet aspects;
  bool saw_keywords = false;
  for (const std::string& raw_line : SplitLines(text)) {
    const std::string line = Trim(raw_line);
    const size_t colon = line.find(':');
    if (colon == std::string::npos || colon == 0) continue;
    const std::string label = Trim(line.substr(0, colon));
    const std::string value = Trim(line.substr(colon + 1));
    if (value.empty()) continue;
    const std::string label_lower = Lower(label);
    if (label_lower == "keywords") {
      aspects.keywords = SplitCommaList(value);
      saw_keywords = !aspects.keywords.empty();
    } else if (label_lower == "document type") {
      aspects.doc_type = Lower(value);
    } else {
      aspects.extra.emplace_back(label, value);
    }
  }
  if (!saw_keywords) return std::nullopt;
  if (aspects.doc_type.empty()) return std::nullopt;
  return aspects;
}

ExtractedAspects ExtractAspects(const std::string& text,
                                const HashedTfidfEmbedder& embedder,
                                AspectService* service) {
  if (service != nullptr) {
    const std::optional<std::string> description = service->Describe(text);
    if (description.has_value()) {
      std::optional<AspectSet> parsed = ParseAspectDescription(*description);
      if (parsed.has_value()) {
        return ExtractedAspects{std::move(*parsed), /*used_fallback=*/false};
      }
    }
    // Fall through to the rule-based path, flagged.
    ExtractedAspects fallback =
        ExtractAspects(text, embedder, /*service=*/nullptr);
    fallback.used_fallback = true;
    return fallback;
  }

  ExtractedAspects out;
  std::map<std::string, int64_t> tf;
  for (const std::string& token : Tokenize(text)) ++tf[token];
  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(tf.size());
  for (const auto& [token, count] : tf) {
    scored.emplace_back(static_cast<double>(count) * embedder.Idf(token),
                        token);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const size_t take =
      std::min<size_t>(scored.size(), static_cast<size_t>(kAspectKeywords));
  for (size_t i = 0; i < take; ++i) out.aspects.keywords.push_back(scored[i].second);
  out.aspects.doc_type = ClassifyDocType(text);
  return out;
}

std::string ConditionText::Render() const {
  std::string out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += lines[i].first;
    out += ": ";
    out += lines[i].second;
  }
  return out;
}

ConditionText BuildCondition(const AspectSet& aspects, ConditionMode mode,
                             const std::vector<std::string>& topic_keywords,
                             const std::optional<std::string>& doc_type_hint) {
  ConditionText condition;
  const auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
      if (i > 0) out += ", ";
      out += items[i];
    }
    return out;
  };

  if (mode == ConditionMode::kPretrain) {
    if (!aspects.doc_type.empty()) {
      condition.lines.emplace_back("Document Type", aspects.doc_type);
    }
    condition.lines.emplace_back("Keywords", join(aspects.keywords));
    for (const auto& [label, value] : aspects.extra) {
      condition.lines.emplace_back(label, value);
    }
    return condition;
  }

  if (topic_keywords.empty()) {
    throw ConfigError("finetune condition requires topic keywords");
  }
  if (doc_type_hint.has_value()) {
    condition.lines.emplace_back("Document Type", *doc_type_hint);
  }
  condition.lines.emplace_back("Keywords", join(topic_keywords));
  return condition;
}

TokenSequence EncodeCondition(const Vocabulary& vocab,
                              const ConditionText& condition,
                              int64_t max_len) {
  TokenSequence seq;
  seq.ids.push_back(Vocabulary::kBos);
  bool first_line = true;
  for (const auto& [label, value] : condition.lines) {
    if (!first_line && static_cast<int64_t>(seq.ids.size()) < max_len - 1) {
      seq.ids.push_back(Vocabulary::kSep);
    }
    first_line = false;
    for (const std::string& token : Tokenize(value)) {
      if (static_cast<int64_t>(seq.ids.size()) >= max_len - 1) break;
      // Keyword phrases may carry commas from the rendered form.
      std::string clean = token;
      while (!clean.empty() && (clean.back() == ',' || clean.back() == '.')) {
        clean.pop_back();
      }
      if (clean.empty()) continue;
      seq.ids.push_back(vocab.id_of(clean));
    }
  }
  seq.ids.push_back(Vocabulary::kEos);
  if (static_cast<int64_t>(seq.ids.size()) > max_len) {
    seq.ids.resize(static_cast<size_t>(max_len));
    seq.ids.back() = Vocabulary::kEos;
  }
  return seq;
}

}  // namespace pipeline
}  // namespace ctcl
