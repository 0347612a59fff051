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

#include "ctcl/rng.h"

#include <cmath>
#include <numbers>

#include "ctcl/error.h"

namespace ctcl {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85;

inline void MulHiLo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  const uint64_t product = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(product >> 32);
  *lo = static_cast<uint32_t>(product);
}

inline std::array<uint32_t, 4> PhiloxRound(const std::array<uint32_t, 4>& c,
                                           const std::array<uint32_t, 2>& k) {
  uint32_t hi0, lo0, hi1, lo1;
  MulHiLo(kPhiloxM0, c[0], &hi0, &lo0);
  MulHiLo(kPhiloxM1, c[2], &hi1, &lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> PhiloxBlock(const std::array<uint32_t, 4>& counter,
                                    const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> state = counter;
  std::array<uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    state = PhiloxRound(state, k);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return state;
}

uint64_t Mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t seed, uint64_t tag0, uint64_t tag1) {
  return Mix64(Mix64(Mix64(seed) ^ tag0) ^ tag1);
}

uint64_t Prng::Bits(uint64_t index) const {
  const std::array<uint32_t, 4> counter = {
      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32),
      static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                       static_cast<uint32_t>(seed_ >> 32)};
  const std::array<uint32_t, 4> out = PhiloxBlock(counter, key);
  return (static_cast<uint64_t>(out[0]) << 32) | out[1];
}

double Prng::Uniform(uint64_t index) const {
  return static_cast<double>(Bits(index) >> 11) * 0x1.0p-53;
}

double Prng::Normal(uint64_t index) const {
  const std::array<uint32_t, 4> counter = {
      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32),
      static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed_),
                                       static_cast<uint32_t>(seed_ >> 32)};
  const std::array<uint32_t, 4> out = PhiloxBlock(counter, key);
  const uint64_t a = (static_cast<uint64_t>(out[0]) << 32) | out[1];
  const uint64_t b = (static_cast<uint64_t>(out[2]) << 32) | out[3];
  // u1 in (0, 1] so the log is finite; u2 in [0, 1).
  const double u1 =
      (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

uint64_t Prng::UniformInt(uint64_t index, uint64_t bound) const {
  if (bound == 0) throw NumericError("UniformInt: bound must be positive");
  const uint64_t bits = Bits(index);
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(bits) * bound) >> 64);
}

std::vector<int64_t> SampleWithoutReplacement(const Prng& prng,
                                              int64_t population,
                                              int64_t count) {
  if (count > population) {
    throw ConfigError("SampleWithoutReplacement: count exceeds population");
  }
  std::vector<int64_t> pool(static_cast<size_t>(population));
  for (int64_t i = 0; i < population; ++i) pool[static_cast<size_t>(i)] = i;
  // Partial Fisher-Yates: after k swaps the first k slots hold the sample.
  for (int64_t i = 0; i < count; ++i) {
    const uint64_t j =
        static_cast<uint64_t>(i) +
        prng.UniformInt(static_cast<uint64_t>(i),
                        static_cast<uint64_t>(population - i));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  std::vector<int64_t> sample(pool.begin(), pool.begin() + count);
  std::sort(sample.begin(), sample.end());
  return sample;
}

}  // namespace ctcl
