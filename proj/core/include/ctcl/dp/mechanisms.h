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

#ifndef CTCL_DP_MECHANISMS_H_
#define CTCL_DP_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ctcl {
namespace dp {

// A raw topic histogram plus its Gaussian-noised release. `proportions` are
// the post-processed noisy counts: negatives clamped to zero, then
// renormalized (uniform if everything clamps to zero).
struct NoisyHistogram {
  std::vector<double> noisy_counts;
  std::vector<double> proportions;
  double sigma_used = 0.0;
};

// Adds independent N(0, sigma^2) noise to every bin, keyed by (seed, bin),
// and post-processes to proportions.
NoisyHistogram NoiseHistogram(const std::vector<int64_t>& raw_counts,
                              double sigma, uint64_t seed);

// L2-clips a gradient to norm at most `clip_norm`. Throws NumericError on a
// non-finite component.
std::vector<double> ClipPerExample(std::span<const double> gradient,
                                   double clip_norm);

// Streaming DP gradient aggregation: clipped per-example gradients summed in
// ascending example order, Gaussian noise of std sigma * clip_norm added per
// coordinate keyed by (seed, step, coordinate), mean over the batch size.
//
// Accumulation happens in fixed-size chunks whose partial sums are reduced in
// chunk order, so the result is byte-identical for any worker-thread count.
class DpGradientAccumulator {
 public:
  // clip_norm may be +infinity (no clipping); noise_multiplier == 0 disables
  // the noise draw entirely.
  DpGradientAccumulator(int64_t dimension, int64_t batch_size,
                        double clip_norm, double noise_multiplier,
                        uint64_t seed, int64_t step, int64_t chunk_size = 8);

  int64_t num_chunks() const;
  int64_t chunk_size() const { return chunk_size_; }

  // Adds example `index` (0-based position in the batch) to its chunk's
  // partial sum; examples within a chunk must arrive in ascending order,
  // distinct chunks may be filled concurrently.
  void Add(int64_t index, std::span<const double> gradient);

  // Reduces chunk partials in order, applies noise, divides by batch size.
  std::vector<double> Finalize();

 private:
  int64_t dimension_;
  int64_t batch_size_;
  double clip_norm_;
  double noise_multiplier_;
  uint64_t seed_;
  int64_t step_;
  int64_t chunk_size_;
  std::vector<std::vector<double>> chunk_sums_;
  std::vector<int64_t> chunk_fill_;
};

// One-call form over a materialized batch; used directly where the batch is
// small and by tests of the aggregation contract.
std::vector<double> DpAggregate(
    const std::vector<std::vector<double>>& per_example_gradients,
    double clip_norm, double noise_multiplier, int64_t batch_size,
    uint64_t seed, int64_t step);

}  // namespace dp
}  // namespace ctcl

#endif  // CTCL_DP_MECHANISMS_H_
