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

#ifndef CTCL_DP_GAUSSIAN_H_
#define CTCL_DP_GAUSSIAN_H_

#include <cstdint>

namespace ctcl {
namespace dp {

// Cdf of the standard normal distribution.
double StandardNormalCdf(double x);

// The exact delta achieved by the Gaussian mechanism with noise `sigma` on a
// statistic of L2 sensitivity `sensitivity` at privacy parameter `epsilon`:
//   delta = Phi(s/(2 sigma) - eps sigma/s) - e^eps Phi(-s/(2 sigma) - eps sigma/s)
double GaussianMechanismDelta(double epsilon, double sigma,
                              double sensitivity);

// Smallest epsilon such that Gaussian noise of std `sigma` gives
// (epsilon, delta)-DP at the given L2 sensitivity. Bisection on the exact
// two-Cdf characterization, resolved to 1e-9; the returned value is on the
// safe (larger) side of the bracket. sigma == 0 returns +infinity.
double GaussianMechanismEpsilon(double sigma, double sensitivity,
                                double delta);

// Smallest sigma such that the Gaussian mechanism is (epsilon, delta)-DP.
// Inverse of GaussianMechanismEpsilon by bisection; round-trips within 1e-6.
double CalibrateGaussianSigma(double epsilon, double sensitivity,
                              double delta);

// delta = 1/(N ln N) for a private dataset of N records. Requires N >= 3 so
// the rule yields a value in (0, 1).
double DeltaForDatasetSize(int64_t n);

}  // namespace dp
}  // namespace ctcl

#endif  // CTCL_DP_GAUSSIAN_H_
