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

#ifndef CTCL_DP_RDP_H_
#define CTCL_DP_RDP_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace ctcl {
namespace dp {

// One release of a statistic with Gaussian noise (e.g. the topic histogram).
struct GaussianEvent {
  double sigma = 0.0;        // noise std, same units as the statistic
  double sensitivity = 1.0;  // L2 sensitivity
};

// T steps of the subsampled Gaussian mechanism (DP-Adam training).
struct SubsampledGaussianEvent {
  double noise_multiplier = 0.0;  // noise std / clip norm, dimensionless
  double sampling_rate = 0.0;     // q = batch_size / dataset_size
  int64_t steps = 0;
};

using DpEvent = std::variant<GaussianEvent, SubsampledGaussianEvent>;

// Append-only record of every mechanism applied to the private data.
// Composition over the ledger is order-independent.
class AccountantLedger {
 public:
  void RecordGaussian(double sigma, double sensitivity);
  void RecordSubsampledGaussian(double noise_multiplier, double sampling_rate,
                                int64_t steps);

  const std::vector<DpEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  std::string ToJson() const;
  static AccountantLedger FromJson(const std::string& json_text);

 private:
  std::vector<DpEvent> events_;
};

// Renyi orders used for accounting: integers 2..256 plus a few fractional
// orders 1.5 and 1.25 * 2^k that only apply to pure-Gaussian ledgers.
const std::vector<double>& DefaultAlphaGrid();

// Renyi divergence bound of one subsampled Gaussian step at integer order
// alpha >= 2 under Poisson sampling at rate q. q == 1 is the closed form
// alpha / (2 sigma^2); q < 1 is the binomial-expansion bound evaluated with
// a numerically stable log-sum-exp.
double SubsampledGaussianRdp(double sigma, double q, int64_t alpha);

// Renyi curve over `alpha_grid` (non-integer orders require q == 1).
std::vector<double> SubsampledGaussianRdpCurve(
    double sigma, double q, const std::vector<double>& alpha_grid);

// Composes every event in the ledger in Renyi space and converts to the
// smallest epsilon at the given delta over the default order grid.
double ComposeAndConvert(const AccountantLedger& ledger, double delta);

// Smallest noise multiplier such that [Gaussian(histogram_sigma, 1),
// SubsampledGaussian(sigma, q, steps)] composes to `target_epsilon` at
// `delta`, within 1e-3 and never below the target's noise requirement.
// histogram_sigma == 0 means no histogram release. Throws BudgetError when
// the histogram alone exceeds the target.
double SolveNoiseMultiplier(double target_epsilon, double delta, double q,
                            int64_t steps, double histogram_sigma);

}  // namespace dp
}  // namespace ctcl

#endif  // CTCL_DP_RDP_H_
