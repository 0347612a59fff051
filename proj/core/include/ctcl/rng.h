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

#ifndef CTCL_RNG_H_
#define CTCL_RNG_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ctcl {

// Philox4x32-10 block function (Salmon et al., SC 2011). Every draw is a pure
// function of (key, counter), so parallel callers can address draws by index
// instead of sharing mutable generator state.
std::array<uint32_t, 4> PhiloxBlock(const std::array<uint32_t, 4>& counter,
                                    const std::array<uint32_t, 2>& key);

// SplitMix64 finalizer, used to derive sub-seeds from (seed, tag...) tuples.
uint64_t Mix64(uint64_t x);

// Derives a child seed from a parent seed and up to two tags. Stable across
// platforms; used to give every pipeline stage / document / step its own
// independent stream.
uint64_t DeriveSeed(uint64_t seed, uint64_t tag0, uint64_t tag1 = 0);

// A counter-addressed random stream. Draw i of stream s under seed k is
// always the same value, regardless of call order or thread placement.
class Prng {
 public:
  Prng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

  // Raw 64 random bits for draw `index`.
  uint64_t Bits(uint64_t index) const;

  // Uniform double in [0, 1) with 53-bit resolution.
  double Uniform(uint64_t index) const;

  // Standard normal via Box-Muller on one 128-bit block.
  double Normal(uint64_t index) const;

  // Uniform integer in [0, bound), bound > 0. Lemire multiply-shift; the
  // modulo bias is below 2^-64 and irrelevant at this scale.
  uint64_t UniformInt(uint64_t index, uint64_t bound) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
};

// Draws `count` distinct indices from [0, population) keyed by `prng`,
// returned in ascending order. Deterministic partial Fisher-Yates.
std::vector<int64_t> SampleWithoutReplacement(const Prng& prng,
                                              int64_t population,
                                              int64_t count);

// In-place Fisher-Yates shuffle keyed by `prng`.
template <typename T>
void DeterministicShuffle(std::vector<T>& items, const Prng& prng) {
  for (int64_t i = static_cast<int64_t>(items.size()) - 1; i > 0; --i) {
    const uint64_t j = prng.UniformInt(static_cast<uint64_t>(i),
                                       static_cast<uint64_t>(i) + 1);
    std::swap(items[static_cast<size_t>(i)], items[static_cast<size_t>(j)]);
  }
}

// Stream tags so independent consumers of the same seed never collide.
namespace rng_stream {
inline constexpr uint64_t kToyCorpus = 1;
inline constexpr uint64_t kSplit = 2;
inline constexpr uint64_t kKmeansInit = 3;
inline constexpr uint64_t kHistogramNoise = 4;
inline constexpr uint64_t kModelInit = 5;
inline constexpr uint64_t kBatchSampling = 6;
inline constexpr uint64_t kGradientNoise = 7;
inline constexpr uint64_t kSampler = 8;
inline constexpr uint64_t kSynthesis = 9;
}  // namespace rng_stream

}  // namespace ctcl

#endif  // CTCL_RNG_H_
