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
//
// Operator surface: gen-toy, build-topics, pretrain, fit, synth, eval and
// the privacy-accounting calculator. Every stage writes a deterministic run
// manifest; exit codes are 0 (ok), 2 (configuration), 3 (privacy budget),
// 4 (numeric failure).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ctcl/corpus.h"
#include "ctcl/dp/gaussian.h"
#include "ctcl/dp/rdp.h"
#include "ctcl/embedding.h"
#include "ctcl/error.h"
#include "ctcl/hash.h"
#include "ctcl/model/parameters.h"
#include "ctcl/model/sampler.h"
#include "ctcl/parallel.h"
#include "ctcl/pipeline/manifest.h"
#include "ctcl/pipeline/pipeline.h"
#include "ctcl/rng.h"
#include "ctcl/topics.h"
#include "run_config.h"

namespace ctcl {
namespace tools {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitNumeric = 4;

namespace {

struct GlobalOptions {
  std::string config_path;
  int threads = 1;
  std::optional<uint64_t> seed_override;
  std::optional<bool> from_scratch;
  std::optional<double> target_epsilon;
  std::optional<double> noise_multiplier;
  std::optional<int64_t> synthesis_size;
};

RunConfig LoadConfig(const GlobalOptions& options) {
  if (options.config_path.empty()) {
    throw ConfigError("--config is required for this command");
  }
  RunConfig config = RunConfig::FromJsonFile(options.config_path);
  if (const char* env_seed = std::getenv("CTCL_SEED")) {
    config.seed = std::stoull(env_seed);
  }
  if (options.seed_override.has_value()) config.seed = *options.seed_override;
  if (options.from_scratch.has_value()) {
    config.ablation.from_scratch = *options.from_scratch;
  }
  if (options.target_epsilon.has_value()) {
    config.dp.target_epsilon = *options.target_epsilon;
    config.dp.noise_multiplier.reset();
  }
  if (options.noise_multiplier.has_value()) {
    config.dp.noise_multiplier = *options.noise_multiplier;
    config.dp.target_epsilon.reset();
  }
  if (options.synthesis_size.has_value()) {
    config.synthesis.size = *options.synthesis_size;
  }
  SetWorkerThreads(options.threads);
  // Seeds propagate from the single run seed.
  config.pretrain.seed = DeriveSeed(config.seed, 101);
  config.finetune.seed = DeriveSeed(config.seed, 102);
  config.downstream_train.seed = DeriveSeed(config.seed, 103);
  config.model.seed = DeriveSeed(config.seed, 104);
  config.downstream_model.seed = DeriveSeed(config.seed, 105);
  return config;
}

pipeline::RunManifest StartManifest(const std::string& command,
                                    const RunConfig& config) {
  pipeline::RunManifest manifest;
  manifest.command = command;
  manifest.effective_config = config.ToJson();
  manifest.config_hash = HashHex(Fnv1a64(manifest.effective_config));
  manifest.seed = config.seed;
  return manifest;
}

void RecordInput(pipeline::RunManifest& manifest, const std::string& path) {
  manifest.input_files[path] = HashHex(HashFile(path));
}

void RecordOutput(pipeline::RunManifest& manifest, const std::string& path) {
  manifest.output_files[path] = HashHex(HashFile(path));
}

std::string ManifestPath(const RunConfig& config, const std::string& command) {
  std::filesystem::create_directories(config.paths.manifest_dir);
  return (std::filesystem::path(config.paths.manifest_dir) /
          (command + ".manifest.json"))
      .string();
}

void RequirePath(const std::string& path, const std::string& role) {
  if (path.empty()) {
    throw ConfigError("config: paths." + role + " must be set");
  }
  if (!std::filesystem::exists(path)) {
    throw ConfigError("missing " + role + " file: " + path);
  }
}

int CmdGenToy(const std::string& spec_path, const std::string& out_path) {
  const ToyCorpusSpec spec = ToyCorpusSpec::FromJsonFile(spec_path);
  const Corpus corpus = GenerateToyCorpus(spec, Provenance::kPublic);
  SaveCorpus(corpus, out_path);
  std::cout << "wrote " << corpus.size() << " documents to " << out_path
            << "\n";
  return kExitOk;
}

int CmdBuildTopics(const GlobalOptions& options) {
  const RunConfig config = LoadConfig(options);
  RequirePath(config.paths.public_corpus, "public_corpus");
  pipeline::RunManifest manifest = StartManifest("build-topics", config);
  RecordInput(manifest, config.paths.public_corpus);

  const Corpus public_corpus =
      LoadCorpus(config.paths.public_corpus, Provenance::kPublic);
  manifest.input_provenances.push_back(ProvenanceName(public_corpus.provenance));

  const Vocabulary vocab = BuildVocabulary(public_corpus, config.vocab.max_size,
                                           config.vocab.min_count);
  const HashedTfidfEmbedder embedder(
      public_corpus,
      EmbedderConfig{config.topics.dimension, DeriveSeed(config.seed, 201)});
  TopicFitOptions fit_options;
  fit_options.tau = config.topics.tau;
  fit_options.stop_top_n = config.topics.stop_top_n;
  const TopicModel topics =
      FitTopics(public_corpus, config.topics.k, embedder,
                DeriveSeed(config.seed, 202), fit_options);

  vocab.Save(config.paths.vocab);
  embedder.Save(config.paths.embedder);
  topics.Save(config.paths.topic_model);
  RecordOutput(manifest, config.paths.vocab);
  RecordOutput(manifest, config.paths.embedder);
  RecordOutput(manifest, config.paths.topic_model);
  for (int64_t t = 0; t < topics.k; ++t) {
    if (!topics.empty_topic_warning.empty() &&
        topics.empty_topic_warning[static_cast<size_t>(t)]) {
      manifest.warnings.push_back("topic " + std::to_string(t) +
                                  " has no documents");
    }
  }
  manifest.Write(ManifestPath(config, "build-topics"));

  std::cout << "topic model: k=" << topics.k << " tau=" << topics.tau
            << " dim=" << topics.dimension << "\n";
  for (int64_t t = 0; t < topics.k; ++t) {
    std::cout << "  topic " << t << ":";
    for (const std::string& kw : topics.keywords[static_cast<size_t>(t)]) {
      std::cout << " " << kw;
    }
    std::cout << "\n";
  }
  return kExitOk;
}

int CmdPretrain(const GlobalOptions& options) {
  const RunConfig config = LoadConfig(options);
  RequirePath(config.paths.public_corpus, "public_corpus");
  RequirePath(config.paths.vocab, "vocab");
  RequirePath(config.paths.embedder, "embedder");
  pipeline::RunManifest manifest = StartManifest("pretrain", config);
  RecordInput(manifest, config.paths.public_corpus);
  RecordInput(manifest, config.paths.vocab);
  RecordInput(manifest, config.paths.embedder);

  const Corpus public_corpus =
      LoadCorpus(config.paths.public_corpus, Provenance::kPublic);
  manifest.input_provenances.push_back(ProvenanceName(public_corpus.provenance));
  const Vocabulary vocab = Vocabulary::Load(config.paths.vocab);
  const HashedTfidfEmbedder embedder =
      HashedTfidfEmbedder::Load(config.paths.embedder);

  model::ModelConfig model_config = config.model;
  model_config.vocab_size = vocab.size();
  std::unique_ptr<pipeline::HttpAspectService> service;
  if (config.aspect_service_url.has_value()) {
    service = std::make_unique<pipeline::HttpAspectService>(
        *config.aspect_service_url);
  }
  const pipeline::PretrainResult result = pipeline::PretrainGenerator(
      public_corpus, vocab, embedder, model_config, config.pretrain,
      service.get());
  if (result.fallback_count > 0) {
    manifest.warnings.push_back(
        "aspect service fell back to rule-based extraction for " +
        std::to_string(result.fallback_count) + " documents");
  }

  model::SaveCheckpoint(result.params, model_config,
                        config.paths.pretrained_checkpoint);
  RecordOutput(manifest, config.paths.pretrained_checkpoint);
  manifest.metrics["initial_loss"] = result.stats.step_losses.front();
  manifest.metrics["final_loss"] = result.stats.step_losses.back();
  manifest.Write(ManifestPath(config, "pretrain"));

  std::cout << "pretrained " << result.params.size() << " parameters, loss "
            << result.stats.step_losses.front() << " -> "
            << result.stats.step_losses.back() << "\n";
  return kExitOk;
}

int CmdFit(const GlobalOptions& options) {
  const RunConfig config = LoadConfig(options);
  RequirePath(config.paths.private_corpus, "private_corpus");
  RequirePath(config.paths.vocab, "vocab");
  RequirePath(config.paths.embedder, "embedder");
  RequirePath(config.paths.topic_model, "topic_model");
  pipeline::RunManifest manifest = StartManifest("fit", config);
  RecordInput(manifest, config.paths.private_corpus);
  RecordInput(manifest, config.paths.vocab);
  RecordInput(manifest, config.paths.embedder);
  RecordInput(manifest, config.paths.topic_model);

  const Corpus private_corpus =
      LoadCorpus(config.paths.private_corpus, Provenance::kPrivate);
  manifest.input_provenances.push_back(
      ProvenanceName(private_corpus.provenance));
  const Vocabulary vocab = Vocabulary::Load(config.paths.vocab);
  const HashedTfidfEmbedder embedder =
      HashedTfidfEmbedder::Load(config.paths.embedder);
  const TopicModel topics = TopicModel::Load(config.paths.topic_model);

  model::Parameters init_params;
  model::ModelConfig model_config = config.model;
  model_config.vocab_size = vocab.size();
  if (config.ablation.from_scratch) {
    init_params = model::InitParameters(model_config);
  } else {
    RequirePath(config.paths.pretrained_checkpoint, "pretrained_checkpoint");
    RecordInput(manifest, config.paths.pretrained_checkpoint);
    model::Checkpoint ckpt =
        model::LoadCheckpoint(config.paths.pretrained_checkpoint);
    model_config = ckpt.config;
    init_params = std::move(ckpt.params);
  }

  pipeline::FitOptions fit_options;
  fit_options.target_epsilon = config.dp.target_epsilon;
  fit_options.noise_multiplier = config.dp.noise_multiplier;
  fit_options.histogram_sigma = config.dp.histogram_sigma;
  fit_options.delta = config.dp.delta;
  fit_options.keyword_conditions = config.ablation.keyword_conditions;
  fit_options.doc_type_hint = config.synthesis.doc_type_hint;

  const pipeline::FitResult result =
      pipeline::FitPrivate(private_corpus, topics, embedder, vocab,
                           init_params, model_config, config.finetune,
                           fit_options);

  model::SaveCheckpoint(result.params, model_config,
                        config.paths.fitted_checkpoint);
  RecordOutput(manifest, config.paths.fitted_checkpoint);
  manifest.ledger_json = result.ledger.ToJson();
  manifest.epsilon = result.epsilon;
  manifest.delta = result.delta;
  manifest.histogram = result.histogram;
  manifest.metrics["noise_multiplier"] = result.noise_multiplier;
  manifest.metrics["sampling_rate"] = result.sampling_rate;
  manifest.metrics["pairs"] = static_cast<double>(result.pairs);
  manifest.metrics["unclassified"] = static_cast<double>(result.unclassified);
  manifest.metrics["initial_loss"] = result.stats.step_losses.front();
  manifest.metrics["final_loss"] = result.stats.step_losses.back();
  manifest.Write(ManifestPath(config, "fit"));

  std::cout << "composed privacy guarantee: (epsilon, delta) = (";
  if (std::isinf(result.epsilon)) {
    std::cout << "infinity";
  } else {
    std::cout << result.epsilon;
  }
  std::cout << ", " << result.delta << ")\n";
  std::cout << "noise multiplier " << result.noise_multiplier
            << ", sampling rate " << result.sampling_rate << ", steps "
            << config.finetune.steps << ", pairs " << result.pairs
            << " (unclassified dropped: " << result.unclassified << ")\n";
  return kExitOk;
}

int CmdSynth(const GlobalOptions& options) {
  const RunConfig config = LoadConfig(options);
  RequirePath(config.paths.vocab, "vocab");
  RequirePath(config.paths.topic_model, "topic_model");
  RequirePath(config.paths.fitted_checkpoint, "fitted_checkpoint");

  // Firewall: synthesis consumes only DP-released artifacts, and refuses to
  // run without the fit manifest's ledger.
  const std::string fit_manifest_path = ManifestPath(config, "fit");
  if (!std::filesystem::exists(fit_manifest_path)) {
    throw ConfigError("missing DP artifacts: no fit manifest at " +
                      fit_manifest_path + "; run fit first");
  }
  const pipeline::RunManifest fit_manifest =
      pipeline::RunManifest::Read(fit_manifest_path);
  if (fit_manifest.ledger_json.empty() || !fit_manifest.histogram.has_value()) {
    throw ConfigError("missing DP artifacts: fit manifest has no ledger");
  }

  pipeline::RunManifest manifest = StartManifest("synth", config);
  RecordInput(manifest, config.paths.vocab);
  RecordInput(manifest, config.paths.topic_model);
  RecordInput(manifest, config.paths.fitted_checkpoint);
  RecordInput(manifest, fit_manifest_path);
  // No corpus is loaded here; input_provenances stays free of "private".

  const Vocabulary vocab = Vocabulary::Load(config.paths.vocab);
  const TopicModel topics = TopicModel::Load(config.paths.topic_model);
  const model::Checkpoint ckpt =
      model::LoadCheckpoint(config.paths.fitted_checkpoint);

  const pipeline::SynthesisResult result = pipeline::Synthesize(
      ckpt.params, ckpt.config, topics, *fit_manifest.histogram,
      config.synthesis.size, config.sampler, vocab,
      DeriveSeed(config.seed, 301), config.synthesis.doc_type_hint,
      config.ablation.keyword_conditions);

  SaveCorpus(result.corpus, config.paths.synthetic_corpus);
  RecordOutput(manifest, config.paths.synthetic_corpus);
  manifest.ledger_json = fit_manifest.ledger_json;
  manifest.epsilon = fit_manifest.epsilon;
  manifest.delta = fit_manifest.delta;
  manifest.metrics["documents"] = static_cast<double>(result.corpus.size());
  manifest.metrics["empty_retries"] =
      static_cast<double>(result.empty_retries);
  manifest.metrics["placeholder_docs"] =
      static_cast<double>(result.placeholder_docs);
  if (result.placeholder_docs > 0) {
    manifest.warnings.push_back(
        std::to_string(result.placeholder_docs) +
        " documents stayed empty after 3 retries and were emitted as "
        "placeholders");
  }
  manifest.Write(ManifestPath(config, "synth"));

  std::cout << "synthesized " << result.corpus.size() << " documents (plan:";
  for (const int64_t c : result.plan.counts) std::cout << " " << c;
  std::cout << ")\n";
  return kExitOk;
}

int CmdEval(const GlobalOptions& options) {
  const RunConfig config = LoadConfig(options);
  RequirePath(config.paths.synthetic_corpus, "synthetic_corpus");
  RequirePath(config.paths.real_test, "real_test");
  RequirePath(config.paths.vocab, "vocab");
  RequirePath(config.paths.embedder, "embedder");
  RequirePath(config.paths.topic_model, "topic_model");
  pipeline::RunManifest manifest = StartManifest("eval", config);
  RecordInput(manifest, config.paths.synthetic_corpus);
  RecordInput(manifest, config.paths.real_test);
  RecordInput(manifest, config.paths.vocab);
  RecordInput(manifest, config.paths.embedder);
  RecordInput(manifest, config.paths.topic_model);

  const Corpus synthetic =
      LoadCorpus(config.paths.synthetic_corpus, Provenance::kSynthetic);
  const Corpus real_test =
      LoadCorpus(config.paths.real_test, Provenance::kPrivate);
  manifest.input_provenances.push_back(ProvenanceName(synthetic.provenance));
  manifest.input_provenances.push_back(ProvenanceName(real_test.provenance));
  const Vocabulary vocab = Vocabulary::Load(config.paths.vocab);
  const HashedTfidfEmbedder embedder =
      HashedTfidfEmbedder::Load(config.paths.embedder);
  const TopicModel topics = TopicModel::Load(config.paths.topic_model);

  model::ModelConfig downstream_config = config.downstream_model;
  downstream_config.vocab_size = vocab.size();
  pipeline::EvalReport report =
      pipeline::Evaluate(synthetic, real_test, downstream_config,
                         config.downstream_train, topics, embedder, vocab);

  // Attach the privacy cost of the artifacts being evaluated, when known.
  const std::string fit_manifest_path = ManifestPath(config, "fit");
  if (std::filesystem::exists(fit_manifest_path)) {
    const pipeline::RunManifest fit_manifest =
        pipeline::RunManifest::Read(fit_manifest_path);
    if (fit_manifest.epsilon.has_value()) {
      report.composed_epsilon = *fit_manifest.epsilon;
      manifest.epsilon = fit_manifest.epsilon;
      manifest.delta = fit_manifest.delta;
    }
  }

  manifest.metrics["next_word_accuracy"] = report.next_word_accuracy;
  manifest.metrics["perplexity"] = report.perplexity;
  manifest.metrics["topic_js_divergence"] = report.topic_js_divergence;
  manifest.Write(ManifestPath(config, "eval"));

  std::cout << "next_word_accuracy = " << report.next_word_accuracy << "\n"
            << "perplexity = " << report.perplexity << "\n"
            << "topic_js_divergence = " << report.topic_js_divergence << "\n";
  return kExitOk;
}

struct AccountOptions {
  std::optional<int64_t> n;
  std::optional<double> delta;
  std::optional<double> sigma;  // finetune noise multiplier
  std::optional<double> q;
  std::optional<int64_t> steps;
  double hist_sigma = 0.0;
  std::optional<double> target_eps;
};

int CmdAccount(const AccountOptions& options) {
  if (!options.n.has_value() && !options.delta.has_value()) {
    throw ConfigError("account: provide --n or --delta");
  }
  const double delta = options.delta.has_value()
                           ? *options.delta
                           : dp::DeltaForDatasetSize(*options.n);
  if (options.n.has_value()) {
    std::cout << "delta = " << delta << "  (1/(N ln N), N = " << *options.n
              << ")\n";
  } else {
    std::cout << "delta = " << delta << "\n";
  }

  if (options.hist_sigma > 0.0) {
    const double hist_eps =
        dp::GaussianMechanismEpsilon(options.hist_sigma, 1.0, delta);
    std::cout << "histogram: sigma = " << options.hist_sigma
              << ", sensitivity = 1 -> epsilon = " << hist_eps
              << "  (analytic Gaussian mechanism)\n";
  }

  if (options.target_eps.has_value()) {
    if (!options.q.has_value() || !options.steps.has_value()) {
      throw ConfigError("account: --target-eps needs --q and --steps");
    }
    const double sigma = dp::SolveNoiseMultiplier(
        *options.target_eps, delta, *options.q, *options.steps,
        options.hist_sigma);
    dp::AccountantLedger ledger;
    if (options.hist_sigma > 0.0) {
      ledger.RecordGaussian(options.hist_sigma, 1.0);
    }
    ledger.RecordSubsampledGaussian(sigma, *options.q, *options.steps);
    std::cout << "solved noise multiplier sigma = " << sigma
              << "  (composed epsilon = "
              << dp::ComposeAndConvert(ledger, delta) << ")\n";
    return kExitOk;
  }

  if (options.sigma.has_value()) {
    if (*options.sigma == 0.0) {
      std::cout << "epsilon = infinity  (warning: sigma = 0 gives no "
                   "privacy guarantee)\n";
      return kExitOk;
    }
    dp::AccountantLedger ledger;
    if (options.hist_sigma > 0.0) {
      ledger.RecordGaussian(options.hist_sigma, 1.0);
    }
    if (options.q.has_value() && options.steps.has_value()) {
      ledger.RecordSubsampledGaussian(*options.sigma, *options.q,
                                      *options.steps);
    } else {
      ledger.RecordGaussian(*options.sigma, 1.0);
    }
    std::cout << "composed epsilon = " << dp::ComposeAndConvert(ledger, delta)
              << "\n";
  }
  return kExitOk;
}

int Dispatch(int argc, char** argv) {
  CLI::App app{"CTCL: privacy-preserving synthetic text at desk scale"};
  app.require_subcommand(1);

  GlobalOptions global;
  std::string toy_spec_path;
  std::string toy_out_path;
  AccountOptions account;

  CLI::App* gen_toy =
      app.add_subcommand("gen-toy", "generate a toy corpus from a spec file");
  gen_toy->add_option("--spec", toy_spec_path, "toy corpus spec (JSON)")
      ->required();
  gen_toy->add_option("--out", toy_out_path, "output corpus (JSONL)")
      ->required();

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", global.config_path, "run config (JSON)");
    cmd->add_option("--threads", global.threads,
                    "worker threads (must not change outputs)");
    cmd->add_option("--seed", global.seed_override, "override config seed");
  };

  CLI::App* build_topics = app.add_subcommand(
      "build-topics", "embed the public corpus and fit the topic model");
  add_common(build_topics);

  CLI::App* pretrain = app.add_subcommand(
      "pretrain", "pretrain the conditional generator on public data");
  add_common(pretrain);

  CLI::App* fit = app.add_subcommand(
      "fit", "DP histogram + DP-Adam finetuning on private data");
  add_common(fit);
  fit->add_flag("--from-scratch",
                [&](int64_t) { global.from_scratch = true; },
                "skip the pretrained checkpoint (ablation)");
  fit->add_option("--target-eps", global.target_epsilon,
                  "composed privacy budget to solve for");
  fit->add_option("--noise-multiplier", global.noise_multiplier,
                  "explicit noise multiplier (alternative to --target-eps)");

  CLI::App* synth = app.add_subcommand(
      "synth", "topic-proportional generation from DP artifacts");
  add_common(synth);
  synth->add_option("--size", global.synthesis_size,
                    "number of documents to synthesize");

  CLI::App* eval = app.add_subcommand(
      "eval", "train a downstream LM on synthetic data and score it");
  add_common(eval);

  CLI::App* account_cmd = app.add_subcommand(
      "account", "privacy accounting calculator (no data touched)");
  account_cmd->add_option("--n", account.n, "private dataset size");
  account_cmd->add_option("--delta", account.delta, "explicit delta");
  account_cmd->add_option("--sigma", account.sigma, "noise multiplier");
  account_cmd->add_option("--q", account.q, "sampling rate");
  account_cmd->add_option("--steps", account.steps, "training steps");
  account_cmd->add_option("--hist-sigma", account.hist_sigma,
                          "histogram noise std");
  account_cmd->add_option("--target-eps", account.target_eps,
                          "solve the noise multiplier for this epsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (gen_toy->parsed()) return CmdGenToy(toy_spec_path, toy_out_path);
  if (build_topics->parsed()) return CmdBuildTopics(global);
  if (pretrain->parsed()) return CmdPretrain(global);
  if (fit->parsed()) return CmdFit(global);
  if (synth->parsed()) return CmdSynth(global);
  if (eval->parsed()) return CmdEval(global);
  if (account_cmd->parsed()) return CmdAccount(account);
  return kExitConfig;
}

}  // namespace
}  // namespace tools
}  // namespace ctcl

int main(int argc, char** argv) {
  try {
    return ctcl::tools::Dispatch(argc, argv);
  } catch (const ctcl::BudgetError& e) {
    std::cerr << "privacy budget error: " << e.what() << "\n";
    return ctcl::tools::kExitBudget;
  } catch (const ctcl::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return ctcl::tools::kExitNumeric;
  } catch (const ctcl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ctcl::tools::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ctcl::tools::kExitConfig;
  }
}
