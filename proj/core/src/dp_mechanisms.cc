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

#include "ctcl/dp/mechanisms.h"

#include <cmath>
#include <limits>

#include "ctcl/error.h"
#include "ctcl/rng.h"

namespace ctcl {
namespace dp {

NoisyHistogram NoiseHistogram(const std::vector<int64_t>& raw_counts,
                              double sigma, uint64_t seed) {
  if (sigma < 0.0) throw ConfigError("histogram sigma must be nonnegative");
  NoisyHistogram out;
  out.sigma_used = sigma;
  out.noisy_counts.resize(raw_counts.size());
  for (size_t bin = 0; bin < raw_counts.size(); ++bin) {
    double noise = 0.0;
    if (sigma > 0.0) {
      const Prng prng(DeriveSeed(seed, rng_stream::kHistogramNoise,
                                 static_cast<uint64_t>(bin)),
                      0);
      noise = sigma * prng.Normal(0);
    }
    out.noisy_counts[bin] = static_cast<double>(raw_counts[bin]) + noise;
  }

  // Post-processing: clamp negatives, renormalize; all-zero -> uniform.
  out.proportions.resize(out.noisy_counts.size());
  double total = 0.0;
  for (size_t bin = 0; bin < out.noisy_counts.size(); ++bin) {
    out.proportions[bin] = out.noisy_counts[bin] < 0.0 ? 0.0 : out.noisy_counts[bin];
    total += out.proportions[bin];
  }
  if (total <= 0.0) {
    const double uniform = 1.0 / static_cast<double>(out.proportions.size());
    for (double& p : out.proportions) p = uniform;
  } else {
    for (double& p : out.proportions) p /= total;
  }
  return out;
}

std::vector<double> ClipPerExample(std::span<const double> gradient,
                                   double clip_norm) {
  if (!(clip_norm > 0.0)) throw ConfigError("clip norm must be positive");
  double squared = 0.0;
  for (const double g : gradient) {
    if (!std::isfinite(g)) {
      throw NumericError("non-finite gradient component before clipping");
    }
    squared += g * g;
  }
  std::vector<double> out(gradient.begin(), gradient.end());
  const double norm = std::sqrt(squared);
  if (norm > clip_norm) {
    const double scale = clip_norm / norm;
    for (double& g : out) g *= scale;
  }
  return out;
}

DpGradientAccumulator::DpGradientAccumulator(int64_t dimension,
                                             int64_t batch_size,
                                             double clip_norm,
                                             double noise_multiplier,
                                             uint64_t seed, int64_t step,
                                             int64_t chunk_size)
    : dimension_(dimension),
      batch_size_(batch_size),
      clip_norm_(clip_norm),
      noise_multiplier_(noise_multiplier),
      seed_(seed),
      step_(step),
      chunk_size_(chunk_size) {
  if (batch_size_ <= 0) throw ConfigError("batch must be non-empty");
  if (!(clip_norm_ > 0.0)) throw ConfigError("clip norm must be positive");
  if (noise_multiplier_ < 0.0) {
    throw ConfigError("noise multiplier must be nonnegative");
  }
  const int64_t chunks = num_chunks();
  chunk_sums_.resize(static_cast<size_t>(chunks));
  chunk_fill_.assign(static_cast<size_t>(chunks), 0);
}

int64_t DpGradientAccumulator::num_chunks() const {
  return (batch_size_ + chunk_size_ - 1) / chunk_size_;
}

void DpGradientAccumulator::Add(int64_t index,
                                std::span<const double> gradient) {
  if (index < 0 || index >= batch_size_) {
    throw ConfigError("example index out of batch range");
  }
  if (static_cast<int64_t>(gradient.size()) != dimension_) {
    throw ConfigError("gradient dimension mismatch");
  }
  double squared = 0.0;
  for (const double g : gradient) {
    if (!std::isfinite(g)) {
      throw NumericError("non-finite gradient component in batch");
    }
    squared += g * g;
  }
  const double norm = std::sqrt(squared);
  const double scale =
      (std::isfinite(clip_norm_) && norm > clip_norm_) ? clip_norm_ / norm : 1.0;

  const size_t chunk = static_cast<size_t>(index / chunk_size_);
  std::vector<double>& sum = chunk_sums_[chunk];
  if (sum.empty()) sum.assign(static_cast<size_t>(dimension_), 0.0);
  for (int64_t i = 0; i < dimension_; ++i) {
    sum[static_cast<size_t>(i)] += scale * gradient[static_cast<size_t>(i)];
  }
  ++chunk_fill_[chunk];
}

std::vector<double> DpGradientAccumulator::Finalize() {
  for (size_t chunk = 0; chunk < chunk_fill_.size(); ++chunk) {
    const int64_t expected =
        std::min(chunk_size_,
                 batch_size_ - static_cast<int64_t>(chunk) * chunk_size_);
    if (chunk_fill_[chunk] != expected) {
      throw ConfigError("batch incomplete at aggregation time");
    }
  }
  std::vector<double> result(static_cast<size_t>(dimension_), 0.0);
  for (const std::vector<double>& sum : chunk_sums_) {
    if (sum.empty()) continue;
    for (int64_t i = 0; i < dimension_; ++i) {
      result[static_cast<size_t>(i)] += sum[static_cast<size_t>(i)];
    }
  }
  if (noise_multiplier_ > 0.0) {
    if (!std::isfinite(clip_norm_)) {
      throw ConfigError("noisy aggregation requires a finite clip norm");
    }
    const Prng prng(DeriveSeed(seed_, rng_stream::kGradientNoise,
                               static_cast<uint64_t>(step_)),
                    0);
    const double noise_std = noise_multiplier_ * clip_norm_;
    for (int64_t i = 0; i < dimension_; ++i) {
      result[static_cast<size_t>(i)] +=
          noise_std * prng.Normal(static_cast<uint64_t>(i));
    }
  }
  const double inv_batch = 1.0 / static_cast<double>(batch_size_);
  for (double& r : result) r *= inv_batch;
  return result;
}

std::vector<double> DpAggregate(
    const std::vector<std::vector<double>>& per_example_gradients,
    double clip_norm, double noise_multiplier, int64_t batch_size,
    uint64_t seed, int64_t step) {
  if (per_example_gradients.empty()) throw ConfigError("batch must be non-empty");
  if (static_cast<int64_t>(per_example_gradients.size()) != batch_size) {
    throw ConfigError("per-example gradient count must equal the batch size");
  }
  const int64_t dimension =
      static_cast<int64_t>(per_example_gradients.front().size());
  DpGradientAccumulator accumulator(dimension, batch_size, clip_norm,
                                    noise_multiplier, seed, step);
  for (int64_t i = 0; i < batch_size; ++i) {
    accumulator.Add(i, per_example_gradients[static_cast<size_t>(i)]);
  }
  return accumulator.Finalize();
}

}  // namespace dp
}  // namespace ctcl
