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

#include <benchmark/benchmark.h>

#include "ctcl/dp/gaussian.h"
#include "ctcl/dp/mechanisms.h"
#include "ctcl/dp/rdp.h"
#include "ctcl/rng.h"

namespace {

void BM_GaussianEpsilon(benchmark::State& state) {
  const double delta = ctcl::dp::DeltaForDatasetSize(75316);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctcl::dp::GaussianMechanismEpsilon(10.0, 1.0, delta));
  }
}
BENCHMARK(BM_GaussianEpsilon);

void BM_ComposeLedger(benchmark::State& state) {
  const double delta = ctcl::dp::DeltaForDatasetSize(75316);
  ctcl::dp::AccountantLedger ledger;
  ledger.RecordGaussian(10.0, 1.0);
  ledger.RecordSubsampledGaussian(3.03, 4096.0 / 75316.0, 2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctcl::dp::ComposeAndConvert(ledger, delta));
  }
}
BENCHMARK(BM_ComposeLedger);

void BM_SolveNoiseMultiplier(benchmark::State& state) {
  const double delta = ctcl::dp::DeltaForDatasetSize(75316);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctcl::dp::SolveNoiseMultiplier(
        4.0, delta, 4096.0 / 75316.0, 2000, 10.0));
  }
}
BENCHMARK(BM_SolveNoiseMultiplier);

void BM_DpAggregate(benchmark::State& state) {
  const int64_t batch = state.range(0);
  const int64_t dim = 4096;
  const ctcl::Prng prng(1, 1);
  uint64_t draw = 0;
  std::vector<std::vector<double>> grads(static_cast<size_t>(batch));
  for (auto& g : grads) {
    g.resize(static_cast<size_t>(dim));
    for (double& x : g) x = prng.Uniform(draw++) - 0.5;
  }
  int64_t step = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctcl::dp::DpAggregate(grads, 1.0, 1.0, batch, 7, ++step));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_DpAggregate)->Arg(16)->Arg(64);

void BM_NoiseHistogram(benchmark::State& state) {
  const std::vector<int64_t> raw(64, 100);
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctcl::dp::NoiseHistogram(raw, 10.0, ++seed));
  }
}
BENCHMARK(BM_NoiseHistogram);

}  // namespace

BENCHMARK_MAIN();
