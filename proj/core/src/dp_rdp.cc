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

#include "ctcl/dp/rdp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "ctcl/error.h"

namespace ctcl {
namespace dp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int64_t kMaxIntegerAlpha = 256;

// Bisection bracket and tolerance for the noise-multiplier solver.
constexpr double kSigmaLow = 1e-2;
constexpr double kSigmaHigh = 1e3;
constexpr double kEpsilonTolerance = 1e-3;

double LogSumExp(const std::vector<double>& log_terms) {
  double max_term = -kInf;
  for (const double t : log_terms) max_term = std::max(max_term, t);
  if (!std::isfinite(max_term)) return max_term;
  double sum = 0.0;
  for (const double t : log_terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

bool IsInteger(double alpha) {
  return alpha == std::floor(alpha);
}

// Renyi bound of a plain Gaussian release at any order alpha > 1.
double GaussianRdp(const GaussianEvent& event, double alpha) {
  if (event.sigma == 0.0) return kInf;
  const double ratio = event.sensitivity / event.sigma;
  return alpha * ratio * ratio / 2.0;
}

// Converts a composed Renyi value at order alpha to epsilon at delta, using
// the conversion of Balle et al. (2020) / Canonne-Kamath-Steinke:
//   eps = rdp + log((alpha-1)/alpha) - (log(delta) + log(alpha)) / (alpha-1)
double RdpToEpsilon(double rdp, double alpha, double delta) {
  if (!std::isfinite(rdp)) return kInf;
  const double eps = rdp + std::log1p(-1.0 / alpha) -
                     (std::log(delta) + std::log(alpha)) / (alpha - 1.0);
  return eps < 0.0 ? 0.0 : eps;
}

}  // namespace

void AccountantLedger::RecordGaussian(double sigma, double sensitivity) {
  if (sigma < 0.0) throw ConfigError("ledger: sigma must be nonnegative");
  if (!(sensitivity > 0.0)) throw ConfigError("ledger: sensitivity must be positive");
  events_.push_back(GaussianEvent{sigma, sensitivity});
}

void AccountantLedger::RecordSubsampledGaussian(double noise_multiplier,
                                                double sampling_rate,
                                                int64_t steps) {
  if (noise_multiplier < 0.0) {
    throw ConfigError("ledger: noise multiplier must be nonnegative");
  }
  if (!(sampling_rate > 0.0) || sampling_rate > 1.0) {
    throw ConfigError("ledger: sampling rate must be in (0, 1]");
  }
  if (steps <= 0) throw ConfigError("ledger: steps must be positive");
  events_.push_back(
      SubsampledGaussianEvent{noise_multiplier, sampling_rate, steps});
}

std::string AccountantLedger::ToJson() const {
  json events = json::array();
  for (const DpEvent& event : events_) {
    if (const auto* g = std::get_if<GaussianEvent>(&event)) {
      events.push_back({{"type", "gaussian"},
                        {"sigma", g->sigma},
                        {"sensitivity", g->sensitivity}});
    } else {
      const auto& s = std::get<SubsampledGaussianEvent>(event);
      events.push_back({{"type", "subsampled_gaussian"},
                        {"noise_multiplier", s.noise_multiplier},
                        {"sampling_rate", s.sampling_rate},
                        {"steps", s.steps}});
    }
  }
  return json{{"events", events}}.dump();
}

AccountantLedger AccountantLedger::FromJson(const std::string& json_text) {
  AccountantLedger ledger;
  json j;
  try {
    j = json::parse(json_text);
    for (const json& event : j.at("events")) {
      const std::string type = event.at("type").get<std::string>();
      if (type == "gaussian") {
        ledger.RecordGaussian(event.at("sigma").get<double>(),
                              event.at("sensitivity").get<double>());
      } else if (type == "subsampled_gaussian") {
        ledger.RecordSubsampledGaussian(
            event.at("noise_multiplier").get<double>(),
            event.at("sampling_rate").get<double>(),
            event.at("steps").get<int64_t>());
      } else {
        throw ConfigError("ledger: unknown event type " + type);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ledger JSON: ") + e.what());
  }
  return ledger;
}

const std::vector<double>& DefaultAlphaGrid() {
  static const std::vector<double>* grid = [] {
    auto* g = new std::vector<double>();
    g->push_back(1.5);
    for (double a = 2.5; a <= 640.0; a *= 2.0) g->push_back(a);  // 1.25 * 2^k
    for (int64_t a = 2; a <= kMaxIntegerAlpha; ++a) {
      g->push_back(static_cast<double>(a));
    }
    std::sort(g->begin(), g->end());
    return g;
  }();
  return *grid;
}

double SubsampledGaussianRdp(double sigma, double q, int64_t alpha) {
  if (!(sigma > 0.0)) return kInf;
  if (!(q > 0.0)) throw ConfigError("sampling rate must be positive");
  if (q > 1.0) throw ConfigError("sampling rate must be at most 1");
  if (alpha < 2) throw ConfigError("subsampled RDP requires integer alpha >= 2");

  const double alpha_d = static_cast<double>(alpha);
  if (q == 1.0) return alpha_d / (2.0 * sigma * sigma);

  // log E_{j~Binomial(alpha, q)} exp(j (j-1) / (2 sigma^2)), the integer-order
  // bound for the Poisson-subsampled Gaussian mechanism.
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  std::vector<double> log_terms;
  log_terms.reserve(static_cast<size_t>(alpha) + 1);
  for (int64_t j = 0; j <= alpha; ++j) {
    const double jd = static_cast<double>(j);
    const double log_binom = std::lgamma(alpha_d + 1.0) -
                             std::lgamma(jd + 1.0) -
                             std::lgamma(alpha_d - jd + 1.0);
    log_terms.push_back(log_binom + jd * log_q + (alpha_d - jd) * log_1mq +
                        jd * (jd - 1.0) / (2.0 * sigma * sigma));
  }
  const double log_moment = LogSumExp(log_terms);
  // The moment is >= 1, so the bound is nonnegative up to rounding.
  return std::max(0.0, log_moment / (alpha_d - 1.0));
}

std::vector<double> SubsampledGaussianRdpCurve(
    double sigma, double q, const std::vector<double>& alpha_grid) {
  std::vector<double> curve;
  curve.reserve(alpha_grid.size());
  for (const double alpha : alpha_grid) {
    if (q == 1.0) {
      curve.push_back(sigma > 0.0 ? alpha / (2.0 * sigma * sigma) : kInf);
    } else if (IsInteger(alpha)) {
      curve.push_back(SubsampledGaussianRdp(sigma, q,
                                            static_cast<int64_t>(alpha)));
    } else {
      curve.push_back(kInf);  // bound not evaluated at fractional orders
    }
  }
  return curve;
}

double ComposeAndConvert(const AccountantLedger& ledger, double delta) {
  if (ledger.empty()) throw ConfigError("cannot compose an empty ledger");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");

  const std::vector<double>& grid = DefaultAlphaGrid();
  double best = kInf;
  for (const double alpha : grid) {
    double rdp = 0.0;
    for (const DpEvent& event : ledger.events()) {
      if (const auto* g = std::get_if<GaussianEvent>(&event)) {
        rdp += GaussianRdp(*g, alpha);
      } else {
        const auto& s = std::get<SubsampledGaussianEvent>(event);
        if (s.noise_multiplier == 0.0) {
          rdp = kInf;
          break;
        }
        double one_step;
        if (s.sampling_rate == 1.0) {
          one_step = alpha / (2.0 * s.noise_multiplier * s.noise_multiplier);
        } else if (IsInteger(alpha)) {
          one_step = SubsampledGaussianRdp(s.noise_multiplier, s.sampling_rate,
                                           static_cast<int64_t>(alpha));
        } else {
          rdp = kInf;  // this order is unavailable for subsampled events
          break;
        }
        rdp += static_cast<double>(s.steps) * one_step;
      }
    }
    best = std::min(best, RdpToEpsilon(rdp, alpha, delta));
  }
  return best;
}

double SolveNoiseMultiplier(double target_epsilon, double delta, double q,
                            int64_t steps, double histogram_sigma) {
  if (!(target_epsilon > 0.0)) throw ConfigError("target epsilon must be positive");
  if (!(q > 0.0) || q > 1.0) throw ConfigError("sampling rate must be in (0, 1]");
  if (steps <= 0) throw ConfigError("steps must be positive");

  const auto composed = [&](double sigma) {
    AccountantLedger ledger;
    if (histogram_sigma > 0.0) ledger.RecordGaussian(histogram_sigma, 1.0);
    ledger.RecordSubsampledGaussian(sigma, q, steps);
    return ComposeAndConvert(ledger, delta);
  };

  // At the top of the bracket the finetuning cost is negligible, so this is
  // effectively the histogram-only epsilon.
  if (composed(kSigmaHigh) > target_epsilon) {
    throw BudgetError(
        "privacy budget exhausted by histogram: composed epsilon exceeds " +
        std::to_string(target_epsilon) + " even at noise multiplier " +
        std::to_string(kSigmaHigh));
  }
  if (composed(kSigmaLow) <= target_epsilon) return kSigmaLow;

  double lo = kSigmaLow;   // composed(lo) > target
  double hi = kSigmaHigh;  // composed(hi) <= target
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (composed(mid) > target_epsilon) {
      lo = mid;
    } else {
      hi = mid;
      if (target_epsilon - composed(hi) < kEpsilonTolerance) break;
    }
  }
  return hi;
}

}  // namespace dp
}  // namespace ctcl
