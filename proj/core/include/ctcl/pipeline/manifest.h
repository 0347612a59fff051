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

#ifndef CTCL_PIPELINE_MANIFEST_H_
#define CTCL_PIPELINE_MANIFEST_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctcl/dp/mechanisms.h"

namespace ctcl {
namespace pipeline {

// Deterministic record of one CLI stage: configuration fingerprint, input
// and output file hashes, privacy artifacts, and metrics. Contains no
// timestamps, so reruns of the same config and inputs are byte-identical.
struct RunManifest {
  std::string command;
  std::string config_hash;        // hash of the effective config JSON
  std::string effective_config;   // canonical JSON text
  uint64_t seed = 0;
  std::map<std::string, std::string> input_files;   // path -> content hash
  std::vector<std::string> input_provenances;       // corpora consumed
  std::map<std::string, std::string> output_files;  // path -> content hash
  std::string ledger_json;                          // empty when absent
  std::optional<double> epsilon;  // +inf allowed (serialized as "infinity")
  std::optional<double> delta;
  std::optional<dp::NoisyHistogram> histogram;  // the DP histogram release
  std::map<std::string, double> metrics;
  std::vector<std::string> warnings;

  std::string ToJson() const;
  static RunManifest FromJson(const std::string& json_text);

  void Write(const std::string& path) const;
  static RunManifest Read(const std::string& path);
};

}  // namespace pipeline
}  // namespace ctcl

#endif  // CTCL_PIPELINE_MANIFEST_H_
