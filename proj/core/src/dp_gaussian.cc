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

#include "ctcl/dp/gaussian.h"

#include <cmath>
#include <limits>

#include "ctcl/error.h"

namespace ctcl {
namespace dp {
namespace {

// Absolute resolution of the epsilon bisection.
constexpr double kEpsilonResolution = 1e-9;

// Relative resolution of the sigma bisection.
constexpr double kSigmaResolution = 1e-9;

}  // namespace

double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double GaussianMechanismDelta(double epsilon, double sigma,
                              double sensitivity) {
  if (sigma <= 0.0) return 1.0;
  const double a = sensitivity / (2.0 * sigma);
  const double b = epsilon * sigma / sensitivity;
  // e^eps * Phi(-a - b) evaluated in log space so large epsilon cannot
  // overflow before the product underflows.
  const double first = StandardNormalCdf(a - b);
  const double second_log =
      epsilon + std::log(StandardNormalCdf(-a - b));
  const double second = std::isfinite(second_log) ? std::exp(second_log) : 0.0;
  const double delta = first - second;
  return delta < 0.0 ? 0.0 : delta;
}

double GaussianMechanismEpsilon(double sigma, double sensitivity,
                                double delta) {
  if (!(sensitivity > 0.0)) throw ConfigError("sensitivity must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();

  if (GaussianMechanismDelta(0.0, sigma, sensitivity) <= delta) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (GaussianMechanismDelta(hi, sigma, sensitivity) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw NumericError("epsilon search failed to bracket");
  }
  while (hi - lo > kEpsilonResolution) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianMechanismDelta(mid, sigma, sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double CalibrateGaussianSigma(double epsilon, double sensitivity,
                              double delta) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(sensitivity > 0.0)) throw ConfigError("sensitivity must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");

  // Exponential search for a bracket: epsilon is decreasing in sigma.
  double lo = sensitivity * 1e-6;
  double hi = sensitivity;
  while (GaussianMechanismDelta(epsilon, hi, sensitivity) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericError("sigma search failed to bracket");
  }
  while (hi - lo > kSigmaResolution * hi) {
    const double mid = 0.5 * (lo + hi);
    if (GaussianMechanismDelta(epsilon, mid, sensitivity) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double DeltaForDatasetSize(int64_t n) {
  if (n < 3) {
    throw ConfigError("delta rule 1/(N ln N) requires N >= 3, got " +
                      std::to_string(n));
  }
  const double nd = static_cast<double>(n);
  return 1.0 / (nd * std::log(nd));
}

}  // namespace dp
}  // namespace ctcl
