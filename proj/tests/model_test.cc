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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <doctest.h>

#include "ctcl/dp/adam.h"
#include "ctcl/error.h"
#include "ctcl/model/math.h"
#include "ctcl/model/metrics.h"
#include "ctcl/model/parameters.h"
#include "ctcl/model/transformer.h"
#include "ctcl/rng.h"

namespace ctcl {
namespace model {
namespace {

ModelConfig SmallEncDec(uint64_t seed) {
  ModelConfig config;
  config.mode = ModelConfig::Mode::kEncoderDecoder;
  config.vocab_size = 12;
  config.d_model = 8;
  config.n_layers = 1;
  config.n_heads = 2;
  config.ffn_dim = 12;
  config.max_len = 8;
  config.seed = seed;
  return config;
}

ModelConfig SmallDecoder(uint64_t seed) {
  ModelConfig config = SmallEncDec(seed);
  config.mode = ModelConfig::Mode::kDecoderOnly;
  return config;
}

// Independent parameter counting from shape products.
int64_t HandCount(const ModelConfig& c) {
  const int64_t d = c.d_model;
  const int64_t f = c.ffn_dim;
  const int64_t attn = 4 * (d * d + d);
  const int64_t ln = 2 * d;
  const int64_t ffn = d * f + f + f * d + d;
  int64_t total = c.vocab_size * d + c.max_len * d;  // token + dec pos
  if (c.mode == ModelConfig::Mode::kEncoderDecoder) {
    total += c.max_len * d;                              // enc pos
    total += c.n_layers * (ln + attn + ln + ffn) + ln;   // encoder + final ln
    total += c.n_layers * (ln + attn + ln + attn + ln + ffn) + ln;  // decoder
  } else {
    total += c.n_layers * (ln + attn + ln + ffn) + ln;
  }
  total += d * c.vocab_size + c.vocab_size;  // output projection
  return total;
}

double MaxRelativeFdError(const ModelConfig& config,
                          const TokenSequence& condition,
                          const TokenSequence& target) {
  Parameters params = InitParameters(config);
  const std::vector<double> grad =
      PerExampleGradient(config, params, condition, target);
  const double h = 1e-6;
  double worst = 0.0;
  std::span<double> flat = params.flat();
  for (int64_t i = 0; i < params.size(); ++i) {
    const double original = flat[static_cast<size_t>(i)];
    flat[static_cast<size_t>(i)] = original + h;
    const double up = ForwardLoss(config, params, condition, target).loss;
    flat[static_cast<size_t>(i)] = original - h;
    const double down = ForwardLoss(config, params, condition, target).loss;
    flat[static_cast<size_t>(i)] = original;
    const double fd = (up - down) / (2.0 * h);
    const double g = grad[static_cast<size_t>(i)];
    const double err =
        std::fabs(fd - g) / std::max({1.0, std::fabs(fd), std::fabs(g)});
    worst = std::max(worst, err);
  }
  return worst;
}

TEST_CASE("initialization is a pure function of config and seed") {
  const ModelConfig config = SmallEncDec(3);
  const Parameters a = InitParameters(config);
  const Parameters b = InitParameters(config);
  CHECK(std::equal(a.flat().begin(), a.flat().end(), b.flat().begin()));
  ModelConfig other = config;
  other.seed = 4;
  const Parameters c = InitParameters(other);
  CHECK(!std::equal(a.flat().begin(), a.flat().end(), c.flat().begin()));
}

TEST_CASE("layer-norm gains start at one, biases at zero") {
  const Parameters params = InitParameters(SmallEncDec(1));
  for (const TensorInfo& info : params.tensors()) {
    if (info.name.ends_with(".gain")) {
      for (const double x : params.tensor(info.name)) CHECK(x == 1.0);
    }
    if (info.name.ends_with(".bias") || info.name.ends_with(".b1")) {
      for (const double x : params.tensor(info.name)) CHECK(x == 0.0);
    }
  }
}

TEST_CASE("parameter count matches the hand-computed closed form") {
  ModelConfig config;
  config.mode = ModelConfig::Mode::kEncoderDecoder;
  config.vocab_size = 100;
  config.d_model = 64;
  config.n_layers = 2;
  config.n_heads = 2;
  config.ffn_dim = 128;
  config.max_len = 128;
  CHECK(ParameterCount(config) == HandCount(config));
  CHECK(InitParameters(config).size() == HandCount(config));

  ModelConfig dec = config;
  dec.mode = ModelConfig::Mode::kDecoderOnly;
  CHECK(ParameterCount(dec) == HandCount(dec));
}

TEST_CASE("untrained loss sits near ln(vocab)") {
  ModelConfig config = SmallEncDec(7);
  config.vocab_size = 100;
  const Parameters params = InitParameters(config);
  const TokenSequence condition{{Vocabulary::kBos, 9, Vocabulary::kEos}};
  const TokenSequence target{{Vocabulary::kBos, 20, 30, 40, Vocabulary::kEos}};
  const ForwardResult result = ForwardLoss(config, params, condition, target);
  CHECK(std::fabs(result.loss - std::log(100.0)) <= 0.1 * std::log(100.0));
}

TEST_CASE("softmax rows sum to one within 1e-9") {
  const Prng prng(17, 0);
  uint64_t draw = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> row(1 + prng.UniformInt(draw++, 40));
    for (double& x : row) x = 30.0 * (prng.Uniform(draw++) - 0.5);
    SoftmaxInPlace(row);
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    CHECK(std::fabs(total - 1.0) <= 1e-9);
  }
  // Model logits rows normalize the same way.
  const ModelConfig config = SmallDecoder(5);
  const Parameters params = InitParameters(config);
  const std::vector<double> logits =
      DecoderLogits(config, params, TokenSequence{}, {1, 6, 7});
  for (int64_t i = 0; i < 3; ++i) {
    std::vector<double> row(
        logits.begin() + i * config.vocab_size,
        logits.begin() + (i + 1) * config.vocab_size);
    SoftmaxInPlace(row);
    CHECK(std::fabs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) <=
          1e-9);
  }
}

TEST_CASE("gradients match central finite differences") {
  const TokenSequence condition{{Vocabulary::kBos, 7, 9, Vocabulary::kEos}};
  const TokenSequence target{{Vocabulary::kBos, 5, 6, 11, Vocabulary::kEos}};
  CHECK(MaxRelativeFdError(SmallEncDec(11), condition, target) < 1e-5);
  CHECK(MaxRelativeFdError(SmallDecoder(13), condition, target) < 1e-5);
}

TEST_CASE("all-PAD targets produce zero loss and a zero gradient") {
  const ModelConfig config = SmallDecoder(3);
  const Parameters params = InitParameters(config);
  const TokenSequence target{{Vocabulary::kPad, Vocabulary::kPad,
                              Vocabulary::kPad}};
  double loss = 1.0;
  const std::vector<double> grad =
      PerExampleGradient(config, params, TokenSequence{}, target, &loss);
  CHECK(loss == 0.0);
  for (const double g : grad) CHECK(g == 0.0);
}

TEST_CASE("gradients are bit-deterministic across calls") {
  const ModelConfig config = SmallEncDec(23);
  const Parameters params = InitParameters(config);
  const TokenSequence condition{{Vocabulary::kBos, 8, Vocabulary::kEos}};
  const TokenSequence target{{Vocabulary::kBos, 6, 7, Vocabulary::kEos}};
  const std::vector<double> a =
      PerExampleGradient(config, params, condition, target);
  const std::vector<double> b =
      PerExampleGradient(config, params, condition, target);
  CHECK(a == b);
}

TEST_CASE("causal mask: earlier logits ignore later input changes") {
  const ModelConfig config = SmallDecoder(29);
  const Parameters params = InitParameters(config);
  std::vector<int64_t> prefix_a = {Vocabulary::kBos, 5, 6, 7, 8};
  std::vector<int64_t> prefix_b = prefix_a;
  const size_t j = 3;
  prefix_b[j] = 9;  // change input position j
  const std::vector<double> la =
      DecoderLogits(config, params, TokenSequence{}, prefix_a);
  const std::vector<double> lb =
      DecoderLogits(config, params, TokenSequence{}, prefix_b);
  const int64_t v = config.vocab_size;
  for (size_t p = 0; p < j; ++p) {  // rows before j are untouched
    for (int64_t c = 0; c < v; ++c) {
      CHECK(la[p * v + static_cast<size_t>(c)] ==
            lb[p * v + static_cast<size_t>(c)]);
    }
  }
  bool row_j_changed = false;
  for (int64_t c = 0; c < v; ++c) {
    row_j_changed |= la[j * static_cast<size_t>(v) + static_cast<size_t>(c)] !=
                     lb[j * static_cast<size_t>(v) + static_cast<size_t>(c)];
  }
  CHECK(row_j_changed);
}

TEST_CASE("loss strictly decreases while overfitting one example") {
  const ModelConfig config = SmallEncDec(31);
  Parameters params = InitParameters(config);
  const TokenSequence condition{{Vocabulary::kBos, 10, Vocabulary::kEos}};
  const TokenSequence target{{Vocabulary::kBos, 5, 7, 9, Vocabulary::kEos}};
  dp::AdamState state(params.size());
  dp::AdamConfig adam;
  double previous = ForwardLoss(config, params, condition, target).loss;
  for (int step = 0; step < 50; ++step) {
    const std::vector<double> grad =
        PerExampleGradient(config, params, condition, target);
    dp::AdamStep(params.flat(), grad, state, adam, 0.01);
    const double loss = ForwardLoss(config, params, condition, target).loss;
    CHECK(loss < previous);
    previous = loss;
  }
  CHECK(previous < 0.5);
}

TEST_CASE("two conditions diverge after training on condition-dependent data") {
  const ModelConfig config = SmallEncDec(37);
  Parameters params = InitParameters(config);
  // Condition 10 -> target token 5; condition 11 -> target token 6.
  const TokenSequence cond_a{{Vocabulary::kBos, 10, Vocabulary::kEos}};
  const TokenSequence cond_b{{Vocabulary::kBos, 11, Vocabulary::kEos}};
  const TokenSequence tgt_a{{Vocabulary::kBos, 5, Vocabulary::kEos}};
  const TokenSequence tgt_b{{Vocabulary::kBos, 6, Vocabulary::kEos}};
  dp::AdamState state(params.size());
  dp::AdamConfig adam;
  for (int step = 0; step < 100; ++step) {
    std::vector<double> grad =
        PerExampleGradient(config, params, cond_a, tgt_a);
    const std::vector<double> gb =
        PerExampleGradient(config, params, cond_b, tgt_b);
    for (size_t i = 0; i < grad.size(); ++i) grad[i] = 0.5 * (grad[i] + gb[i]);
    dp::AdamStep(params.flat(), grad, state, adam, 0.01);
  }
  const std::vector<double> la =
      DecoderLogits(config, params, cond_a, {Vocabulary::kBos});
  const std::vector<double> lb =
      DecoderLogits(config, params, cond_b, {Vocabulary::kBos});
  double max_diff = 0.0;
  for (size_t i = 0; i < la.size(); ++i) {
    max_diff = std::max(max_diff, std::fabs(la[i] - lb[i]));
  }
  CHECK(max_diff > 0.1);
}

TEST_CASE("checkpoints round-trip bit-identically") {
  const ModelConfig config = SmallEncDec(41);
  const Parameters params = InitParameters(config);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ctcl_model.ckpt").string();
  SaveCheckpoint(params, config, path);
  const Checkpoint loaded = LoadCheckpoint(path);
  CHECK(loaded.config == config);
  REQUIRE(loaded.params.size() == params.size());
  CHECK(std::equal(params.flat().begin(), params.flat().end(),
                   loaded.params.flat().begin()));
  std::filesystem::remove(path);
}

TEST_CASE("corrupted magic bytes and truncation are explicit errors") {
  const ModelConfig config = SmallEncDec(43);
  const Parameters params = InitParameters(config);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ctcl_corrupt.ckpt").string();
  SaveCheckpoint(params, config, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("BADMAGIC", 8);
  }
  CHECK_THROWS_WITH_AS(LoadCheckpoint(path), doctest::Contains("magic"),
                       ConfigError);
  SaveCheckpoint(params, config, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
  CHECK_THROWS_WITH_AS(LoadCheckpoint(path), doctest::Contains("truncated"),
                       ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("default 64-d checkpoint stays under 10 MB") {
  ModelConfig config;
  config.mode = ModelConfig::Mode::kEncoderDecoder;
  config.vocab_size = 1000;
  config.d_model = 64;
  config.n_layers = 2;
  config.n_heads = 2;
  config.ffn_dim = 128;
  config.max_len = 128;
  const Parameters params = InitParameters(config);
  // Size bound from the layout: 8 bytes per parameter plus headers.
  CHECK(params.size() * 8 < 10 * 1000 * 1000);
  const std::string path =
      (std::filesystem::temp_directory_path() / "ctcl_size.ckpt").string();
  SaveCheckpoint(params, config, path);
  CHECK(std::filesystem::file_size(path) < 10u * 1000u * 1000u);
  std::filesystem::remove(path);
}

TEST_CASE("hand-built logits that rank the truth first give accuracy 1") {
  const int64_t v = 10;
  const std::vector<int64_t> labels = {7, 3, Vocabulary::kPad, 9};
  std::vector<double> logits(labels.size() * static_cast<size_t>(v), 0.0);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Vocabulary::kPad) continue;
    logits[i * static_cast<size_t>(v) + static_cast<size_t>(labels[i])] = 5.0;
  }
  const auto [hits, positions] = AccuracyFromLogits(logits, v, labels);
  CHECK(positions == 3);  // PAD skipped
  CHECK(hits == 3);
}

TEST_CASE("argmax ties resolve to the lowest token id") {
  const int64_t v = 4;
  const std::vector<int64_t> labels = {1, 2};
  // Tokens 1 and 2 are tied at the top on both rows.
  std::vector<double> logits(labels.size() * static_cast<size_t>(v), 0.0);
  for (size_t row = 0; row < labels.size(); ++row) {
    logits[row * static_cast<size_t>(v) + 1] = 2.0;
    logits[row * static_cast<size_t>(v) + 2] = 2.0;
  }
  const auto [hits, positions] = AccuracyFromLogits(logits, v, labels);
  CHECK(positions == 2);
  CHECK(hits == 1);  // the tie goes to token 1, so only the first row scores
}

TEST_CASE("untrained accuracy on toy data stays below 0.2") {
  ModelConfig config = SmallDecoder(47);
  config.vocab_size = 100;
  const Parameters params = InitParameters(config);
  std::vector<TokenSequence> dataset;
  const Prng prng(3, 1);
  uint64_t draw = 0;
  for (int i = 0; i < 40; ++i) {
    TokenSequence seq;
    seq.ids.push_back(Vocabulary::kBos);
    for (int t = 0; t < 6; ++t) {
      seq.ids.push_back(5 + static_cast<int64_t>(prng.UniformInt(draw++, 95)));
    }
    seq.ids.push_back(Vocabulary::kEos);
    dataset.push_back(std::move(seq));
  }
  CHECK(NextWordAccuracy(config, params, dataset) < 0.2);
}

TEST_CASE("pooled accuracy is the position-weighted mean of subsets") {
  const ModelConfig config = SmallDecoder(53);
  const Parameters params = InitParameters(config);
  std::vector<TokenSequence> first = {
      TokenSequence{{Vocabulary::kBos, 5, 6, Vocabulary::kEos}}};
  std::vector<TokenSequence> second = {
      TokenSequence{{Vocabulary::kBos, 7, 8, 9, 10, Vocabulary::kEos}},
      TokenSequence{{Vocabulary::kBos, 11, Vocabulary::kEos}}};
  std::vector<TokenSequence> all = first;
  all.insert(all.end(), second.begin(), second.end());
  const double acc_first = NextWordAccuracy(config, params, first);
  const double acc_second = NextWordAccuracy(config, params, second);
  const double acc_all = NextWordAccuracy(config, params, all);
  const double n1 = 3, n2 = 7;  // non-PAD label positions per subset
  CHECK(acc_all ==
        doctest::Approx((acc_first * n1 + acc_second * n2) / (n1 + n2))
            .epsilon(1e-12));
}

TEST_CASE("uniform logits give perplexity near the vocabulary size") {
  ModelConfig config = SmallDecoder(59);
  config.vocab_size = 50;
  Parameters params = Parameters::Zeros(config);  // all-zero weights
  const std::vector<TokenSequence> dataset = {
      TokenSequence{{Vocabulary::kBos, 5, 9, 13, Vocabulary::kEos}}};
  const double ppl = Perplexity(config, params, dataset);
  CHECK(std::fabs(ppl - 50.0) <= 5.0);
}

TEST_CASE("perplexity equals exp(loss) against the forward pass") {
  const ModelConfig config = SmallDecoder(61);
  const Parameters params = InitParameters(config);
  const TokenSequence target{{Vocabulary::kBos, 5, 6, 7, Vocabulary::kEos}};
  const double loss =
      ForwardLoss(config, params, TokenSequence{}, target).loss;
  const double ppl = Perplexity(config, params, {target});
  CHECK(ppl == doctest::Approx(std::exp(loss)).epsilon(1e-9));
}

TEST_CASE("perplexity collapses after memorizing one example") {
  const ModelConfig config = SmallDecoder(67);
  Parameters params = InitParameters(config);
  const TokenSequence target{{Vocabulary::kBos, 5, 7, 9, Vocabulary::kEos}};
  dp::AdamState state(params.size());
  for (int step = 0; step < 300; ++step) {
    const std::vector<double> grad =
        PerExampleGradient(config, params, TokenSequence{}, target);
    dp::AdamStep(params.flat(), grad, state, dp::AdamConfig{}, 0.01);
  }
  CHECK(Perplexity(config, params, {target}) < 1.5);
}

TEST_CASE("invalid ids and configs are rejected") {
  const ModelConfig config = SmallDecoder(71);
  const Parameters params = InitParameters(config);
  const TokenSequence bad{{Vocabulary::kBos, config.vocab_size,
                           Vocabulary::kEos}};
  CHECK_THROWS_AS(ForwardLoss(config, params, TokenSequence{}, bad),
                  ConfigError);
  ModelConfig broken = config;
  broken.n_heads = 3;  // 8 % 3 != 0
  CHECK_THROWS_AS(InitParameters(broken), ConfigError);
}

}  // namespace
}  // namespace model
}  // namespace ctcl
