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

#ifndef CTCL_HASH_H_
#define CTCL_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace ctcl {

// FNV-1a, 64 bit. Platform-independent, used for token hashing and for
// fingerprinting configs and files in run manifests.
inline uint64_t Fnv1a64(std::string_view bytes, uint64_t seed = 0) {
  uint64_t h = 0xCBF29CE484222325ull ^ seed;
  for (const char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Lowercase 16-digit hex rendering of a 64-bit hash.
std::string HashHex(uint64_t h);

// FNV-1a fingerprint of a file's bytes. Throws ConfigError if unreadable.
uint64_t HashFile(const std::string& path);

}  // namespace ctcl

#endif  // CTCL_HASH_H_
