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

#include "ctcl/pipeline/manifest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace pipeline {

using nlohmann::json;

namespace {

json EpsilonToJson(const std::optional<double>& epsilon) {
  if (!epsilon.has_value()) return nullptr;
  if (std::isinf(*epsilon)) return "infinity";
  return *epsilon;
}

std::optional<double> EpsilonFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    if (j.get<std::string>() == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("manifest: unrecognized epsilon value");
  }
  return j.get<double>();
}

}  // namespace

std::string RunManifest::ToJson() const {
  json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["effective_config"] = effective_config;
  j["seed"] = seed;
  j["input_files"] = input_files;
  j["input_provenances"] = input_provenances;
  j["output_files"] = output_files;
  if (!ledger_json.empty()) j["ledger"] = json::parse(ledger_json);
  j["epsilon"] = EpsilonToJson(epsilon);
  if (delta.has_value()) {
    j["delta"] = *delta;
  } else {
    j["delta"] = nullptr;
  }
  if (histogram.has_value()) {
    j["histogram"] = {{"noisy_counts", histogram->noisy_counts},
                      {"proportions", histogram->proportions},
                      {"sigma", histogram->sigma_used}};
  }
  j["metrics"] = metrics;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::FromJson(const std::string& json_text) {
  RunManifest m;
  try {
    const json j = json::parse(json_text);
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.effective_config = j.at("effective_config").get<std::string>();
    m.seed = j.at("seed").get<uint64_t>();
    m.input_files =
        j.at("input_files").get<std::map<std::string, std::string>>();
    m.input_provenances =
        j.at("input_provenances").get<std::vector<std::string>>();
    m.output_files =
        j.at("output_files").get<std::map<std::string, std::string>>();
    if (j.contains("ledger")) m.ledger_json = j["ledger"].dump();
    m.epsilon = EpsilonFromJson(j.at("epsilon"));
    if (!j.at("delta").is_null()) m.delta = j["delta"].get<double>();
    if (j.contains("histogram")) {
      dp::NoisyHistogram histogram;
      histogram.noisy_counts =
          j["histogram"].at("noisy_counts").get<std::vector<double>>();
      histogram.proportions =
          j["histogram"].at("proportions").get<std::vector<double>>();
      histogram.sigma_used = j["histogram"].at("sigma").get<double>();
      m.histogram = std::move(histogram);
    }
    m.metrics = j.at("metrics").get<std::map<std::string, double>>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

void RunManifest::Write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open manifest for writing: " + path);
  out << ToJson();
}

RunManifest RunManifest::Read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

}  // namespace pipeline
}  // namespace ctcl
