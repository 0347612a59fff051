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

#include "ctcl/model/transformer.h"

#include <cmath>
#include <string>
#include <vector>

#include "ctcl/error.h"
#include "ctcl/model/math.h"

namespace ctcl {
namespace model {
namespace {

constexpr double kLnEpsilon = 1e-5;

// y[n, out] = x[n, in] @ w[in, out] + b
void Linear(const double* x, int64_t n, int64_t in,
            std::span<const double> w, std::span<const double> b, double* y,
            int64_t out) {
  for (int64_t i = 0; i < n; ++i) {
    double* yi = y + i * out;
    for (int64_t o = 0; o < out; ++o) yi[o] = b[static_cast<size_t>(o)];
    const double* xi = x + i * in;
    for (int64_t k = 0; k < in; ++k) {
      const double xv = xi[k];
      if (xv == 0.0) continue;
      const double* wk = w.data() + k * out;
      for (int64_t o = 0; o < out; ++o) yi[o] += xv * wk[o];
    }
  }
}

// Accumulates dw += x^T dy, db += colsum(dy), dx = dy @ w^T.
void LinearBackward(const double* x, int64_t n, int64_t in,
                    std::span<const double> w, const double* dy, int64_t out,
                    std::span<double> dw, std::span<double> db, double* dx) {
  for (int64_t i = 0; i < n; ++i) {
    const double* xi = x + i * in;
    const double* dyi = dy + i * out;
    for (int64_t o = 0; o < out; ++o) db[static_cast<size_t>(o)] += dyi[o];
    for (int64_t k = 0; k < in; ++k) {
      const double xv = xi[k];
      double* dwk = dw.data() + k * out;
      if (xv != 0.0) {
        for (int64_t o = 0; o < out; ++o) dwk[o] += xv * dyi[o];
      }
      double acc = 0.0;
      const double* wk = w.data() + k * out;
      for (int64_t o = 0; o < out; ++o) acc += wk[o] * dyi[o];
      if (dx != nullptr) dx[i * in + k] += acc;
    }
  }
}

struct LnCache {
  std::vector<double> input;   // [n, d]
  std::vector<double> norm;    // [n, d] normalized rows before gain/bias
  std::vector<double> invstd;  // [n]
};

void LayerNormForward(const double* x, int64_t n, int64_t d,
                      std::span<const double> gain,
                      std::span<const double> bias, double* y,
                      LnCache* cache) {
  if (cache != nullptr) {
    cache->input.assign(x, x + n * d);
    cache->norm.resize(static_cast<size_t>(n * d));
    cache->invstd.resize(static_cast<size_t>(n));
  }
  for (int64_t i = 0; i < n; ++i) {
    const double* xi = x + i * d;
    double mean = 0.0;
    for (int64_t j = 0; j < d; ++j) mean += xi[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      const double c = xi[j] - mean;
      var += c * c;
    }
    var /= static_cast<double>(d);
    const double invstd = 1.0 / std::sqrt(var + kLnEpsilon);
    for (int64_t j = 0; j < d; ++j) {
      const double norm = (xi[j] - mean) * invstd;
      if (cache != nullptr) {
        cache->norm[static_cast<size_t>(i * d + j)] = norm;
      }
      y[i * d + j] =
          norm * gain[static_cast<size_t>(j)] + bias[static_cast<size_t>(j)];
    }
    if (cache != nullptr) cache->invstd[static_cast<size_t>(i)] = invstd;
  }
}

// dx += backward(dout); dgain/dbias accumulated.
void LayerNormBackward(const LnCache& cache, int64_t n, int64_t d,
                       std::span<const double> gain, const double* dout,
                       std::span<double> dgain, std::span<double> dbias,
                       double* dx) {
  std::vector<double> dnorm(static_cast<size_t>(d));
  for (int64_t i = 0; i < n; ++i) {
    const double* douti = dout + i * d;
    const double* normi = cache.norm.data() + i * d;
    double mean_dnorm = 0.0;
    double mean_dnorm_norm = 0.0;
    for (int64_t j = 0; j < d; ++j) {
      dgain[static_cast<size_t>(j)] += douti[j] * normi[j];
      dbias[static_cast<size_t>(j)] += douti[j];
      dnorm[static_cast<size_t>(j)] = douti[j] * gain[static_cast<size_t>(j)];
      mean_dnorm += dnorm[static_cast<size_t>(j)];
      mean_dnorm_norm += dnorm[static_cast<size_t>(j)] * normi[j];
    }
    mean_dnorm /= static_cast<double>(d);
    mean_dnorm_norm /= static_cast<double>(d);
    const double invstd = cache.invstd[static_cast<size_t>(i)];
    for (int64_t j = 0; j < d; ++j) {
      dx[i * d + j] += invstd * (dnorm[static_cast<size_t>(j)] - mean_dnorm -
                                 normi[j] * mean_dnorm_norm);
    }
  }
}

struct AttnParams {
  std::span<const double> wq, bq, wk, bk, wv, bv, wo, bo;
};

struct AttnGrads {
  std::span<double> wq, bq, wk, bk, wv, bv, wo, bo;
};

struct AttnCache {
  std::vector<double> q, k, v;  // q: [n, d]; k, v: [m, d]
  std::vector<double> probs;    // [heads, n, m], zero outside the causal limit
  std::vector<double> ctx;      // [n, d]
};

// Scaled dot-product attention. Queries come from x_q [n, d], keys/values
// from x_kv [m, d]; causal limits row i to keys 0..i (requires n == m).
void AttentionForward(const double* x_q, int64_t n, const double* x_kv,
                      int64_t m, int64_t d, int64_t heads, bool causal,
                      const AttnParams& p, double* y, AttnCache* cache) {
  const int64_t dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  std::vector<double> q(static_cast<size_t>(n * d));
  std::vector<double> k(static_cast<size_t>(m * d));
  std::vector<double> v(static_cast<size_t>(m * d));
  Linear(x_q, n, d, p.wq, p.bq, q.data(), d);
  Linear(x_kv, m, d, p.wk, p.bk, k.data(), d);
  Linear(x_kv, m, d, p.wv, p.bv, v.data(), d);

  std::vector<double> probs(static_cast<size_t>(heads * n * m), 0.0);
  std::vector<double> ctx(static_cast<size_t>(n * d), 0.0);
  for (int64_t h = 0; h < heads; ++h) {
    const int64_t col = h * dh;
    for (int64_t i = 0; i < n; ++i) {
      const int64_t limit = causal ? i + 1 : m;
      double* row = probs.data() + (h * n + i) * m;
      for (int64_t j = 0; j < limit; ++j) {
        double dot = 0.0;
        const double* qi = q.data() + i * d + col;
        const double* kj = k.data() + j * d + col;
        for (int64_t c = 0; c < dh; ++c) dot += qi[c] * kj[c];
        row[j] = dot * scale;
      }
      SoftmaxInPlace(std::span<double>(row, static_cast<size_t>(limit)));
      double* ctxi = ctx.data() + i * d + col;
      for (int64_t j = 0; j < limit; ++j) {
        const double pij = row[j];
        const double* vj = v.data() + j * d + col;
        for (int64_t c = 0; c < dh; ++c) ctxi[c] += pij * vj[c];
      }
    }
  }
  Linear(ctx.data(), n, d, p.wo, p.bo, y, d);
  if (cache != nullptr) {
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->probs = std::move(probs);
    cache->ctx = std::move(ctx);
  }
}

// dx_q += ..., dx_kv += ... .
void AttentionBackward(const double* x_q, int64_t n, const double* x_kv,
                       int64_t m, int64_t d, int64_t heads, bool causal,
                       const AttnParams& p, const AttnCache& cache,
                       const double* dy, const AttnGrads& g, double* dx_q,
                       double* dx_kv) {
  const int64_t dh = d / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  std::vector<double> dctx(static_cast<size_t>(n * d), 0.0);
  LinearBackward(cache.ctx.data(), n, d, p.wo, dy, d, g.wo, g.bo, dctx.data());

  std::vector<double> dq(static_cast<size_t>(n * d), 0.0);
  std::vector<double> dk(static_cast<size_t>(m * d), 0.0);
  std::vector<double> dv(static_cast<size_t>(m * d), 0.0);
  std::vector<double> dprobs(static_cast<size_t>(m));
  for (int64_t h = 0; h < heads; ++h) {
    const int64_t col = h * dh;
    for (int64_t i = 0; i < n; ++i) {
      const int64_t limit = causal ? i + 1 : m;
      const double* row = cache.probs.data() + (h * n + i) * m;
      const double* dctxi = dctx.data() + i * d + col;
      double dot_dp_p = 0.0;
      for (int64_t j = 0; j < limit; ++j) {
        const double* vj = cache.v.data() + j * d + col;
        double dp = 0.0;
        for (int64_t c = 0; c < dh; ++c) dp += dctxi[c] * vj[c];
        dprobs[static_cast<size_t>(j)] = dp;
        dot_dp_p += dp * row[j];
        double* dvj = dv.data() + j * d + col;
        for (int64_t c = 0; c < dh; ++c) dvj[c] += row[j] * dctxi[c];
      }
      for (int64_t j = 0; j < limit; ++j) {
        const double dscore =
            row[j] * (dprobs[static_cast<size_t>(j)] - dot_dp_p) * scale;
        const double* kj = cache.k.data() + j * d + col;
        const double* qi = cache.q.data() + i * d + col;
        double* dqi = dq.data() + i * d + col;
        double* dkj = dk.data() + j * d + col;
        for (int64_t c = 0; c < dh; ++c) {
          dqi[c] += dscore * kj[c];
          dkj[c] += dscore * qi[c];
        }
      }
    }
  }
  LinearBackward(x_q, n, d, p.wq, dq.data(), d, g.wq, g.bq, dx_q);
  LinearBackward(x_kv, m, d, p.wk, dk.data(), d, g.wk, g.bk, dx_kv);
  LinearBackward(x_kv, m, d, p.wv, dv.data(), d, g.wv, g.bv, dx_kv);
}

struct FfnCache {
  std::vector<double> input;  // [n, d]
  std::vector<double> pre;    // [n, f]
  std::vector<double> act;    // [n, f]
};

void FfnForward(const double* x, int64_t n, int64_t d, int64_t f,
                std::span<const double> w1, std::span<const double> b1,
                std::span<const double> w2, std::span<const double> b2,
                double* y, FfnCache* cache) {
  std::vector<double> pre(static_cast<size_t>(n * f));
  Linear(x, n, d, w1, b1, pre.data(), f);
  std::vector<double> act(static_cast<size_t>(n * f));
  for (size_t i = 0; i < act.size(); ++i) act[i] = Gelu(pre[i]);
  Linear(act.data(), n, f, w2, b2, y, d);
  if (cache != nullptr) {
    cache->input.assign(x, x + n * d);
    cache->pre = std::move(pre);
    cache->act = std::move(act);
  }
}

void FfnBackward(const FfnCache& cache, int64_t n, int64_t d, int64_t f,
                 std::span<const double> w1, std::span<const double> w2,
                 const double* dy, std::span<double> dw1,
                 std::span<double> db1, std::span<double> dw2,
                 std::span<double> db2, double* dx) {
  std::vector<double> dact(static_cast<size_t>(n * f), 0.0);
  LinearBackward(cache.act.data(), n, f, w2, dy, d, dw2, db2, dact.data());
  for (size_t i = 0; i < dact.size(); ++i) {
    dact[i] *= GeluDerivative(cache.pre[i]);
  }
  LinearBackward(cache.input.data(), n, d, w1, dact.data(), f, dw1, db1, dx);
}

// Named access to one attention block's parameters (and gradients).
AttnParams AttnParamsFor(const Parameters& params, const std::string& prefix) {
  return AttnParams{params.tensor(prefix + ".wq"), params.tensor(prefix + ".bq"),
                    params.tensor(prefix + ".wk"), params.tensor(prefix + ".bk"),
                    params.tensor(prefix + ".wv"), params.tensor(prefix + ".bv"),
                    params.tensor(prefix + ".wo"), params.tensor(prefix + ".bo")};
}

std::span<double> GradSpan(const Parameters& params, std::vector<double>& grad,
                           const std::string& name) {
  const TensorInfo& info = params.info(name);
  return std::span<double>(grad).subspan(static_cast<size_t>(info.offset),
                                         static_cast<size_t>(info.size));
}

AttnGrads AttnGradsFor(const Parameters& params, std::vector<double>& grad,
                       const std::string& prefix) {
  return AttnGrads{GradSpan(params, grad, prefix + ".wq"),
                   GradSpan(params, grad, prefix + ".bq"),
                   GradSpan(params, grad, prefix + ".wk"),
                   GradSpan(params, grad, prefix + ".bk"),
                   GradSpan(params, grad, prefix + ".wv"),
                   GradSpan(params, grad, prefix + ".bv"),
                   GradSpan(params, grad, prefix + ".wo"),
                   GradSpan(params, grad, prefix + ".bo")};
}

struct BlockCache {
  LnCache ln1;
  AttnCache self_attn;
  LnCache ln_cross;
  AttnCache cross_attn;
  LnCache ln2;
  FfnCache ffn;
};

struct StackCache {
  std::vector<double> embedded;  // [n, d]
  std::vector<BlockCache> layers;
  LnCache final_ln;
  std::vector<double> final_out;  // [n, d]
};

void EmbedTokens(const ModelConfig& config, const Parameters& params,
                 const std::vector<int64_t>& ids, const std::string& pos_name,
                 std::vector<double>& x) {
  const int64_t d = config.d_model;
  const int64_t n = static_cast<int64_t>(ids.size());
  if (n > config.max_len) {
    throw ConfigError("sequence length " + std::to_string(n) +
                      " exceeds max_len " + std::to_string(config.max_len));
  }
  const std::span<const double> tok = params.tensor("embed.token");
  const std::span<const double> pos = params.tensor(pos_name);
  x.assign(static_cast<size_t>(n * d), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t id = ids[static_cast<size_t>(i)];
    if (id < 0 || id >= config.vocab_size) {
      throw ConfigError("token id " + std::to_string(id) +
                        " out of range for vocab " +
                        std::to_string(config.vocab_size));
    }
    for (int64_t j = 0; j < d; ++j) {
      x[static_cast<size_t>(i * d + j)] =
          tok[static_cast<size_t>(id * d + j)] +
          pos[static_cast<size_t>(i * d + j)];
    }
  }
}

// Runs one transformer stack (encoder or decoder). `enc` non-null => decoder
// with cross attention; `causal` controls the self-attention mask.
// Returns the final-LN output; fills `cache` when non-null.
std::vector<double> RunStack(const ModelConfig& config,
                             const Parameters& params,
                             const std::string& stack,  // "enc" or "dec"
                             const std::vector<int64_t>& ids, bool causal,
                             const std::vector<double>* enc, int64_t enc_len,
                             StackCache* cache) {
  const int64_t d = config.d_model;
  const int64_t n = static_cast<int64_t>(ids.size());
  std::vector<double> x;
  EmbedTokens(config, params, ids,
              stack == "enc" ? "embed.pos_enc" : "embed.pos_dec", x);
  if (cache != nullptr) {
    cache->embedded = x;
    cache->layers.resize(static_cast<size_t>(config.n_layers));
  }

  std::vector<double> scratch(static_cast<size_t>(n * d));
  std::vector<double> sub(static_cast<size_t>(n * d));
  for (int64_t layer = 0; layer < config.n_layers; ++layer) {
    const std::string prefix = stack + "." + std::to_string(layer);
    BlockCache* bc =
        cache != nullptr ? &cache->layers[static_cast<size_t>(layer)] : nullptr;

    // Self attention.
    LayerNormForward(x.data(), n, d, params.tensor(prefix + ".ln1.gain"),
                     params.tensor(prefix + ".ln1.bias"), scratch.data(),
                     bc != nullptr ? &bc->ln1 : nullptr);
    const std::string attn_name =
        stack == "enc" ? prefix + ".attn" : prefix + ".self_attn";
    AttentionForward(scratch.data(), n, scratch.data(), n, d, config.n_heads,
                     causal, AttnParamsFor(params, attn_name), sub.data(),
                     bc != nullptr ? &bc->self_attn : nullptr);
    for (size_t i = 0; i < x.size(); ++i) x[i] += sub[i];

    // Cross attention against the encoder output.
    if (enc != nullptr) {
      LayerNormForward(x.data(), n, d,
                       params.tensor(prefix + ".ln_cross.gain"),
                       params.tensor(prefix + ".ln_cross.bias"),
                       scratch.data(), bc != nullptr ? &bc->ln_cross : nullptr);
      AttentionForward(scratch.data(), n, enc->data(), enc_len, d,
                       config.n_heads, /*causal=*/false,
                       AttnParamsFor(params, prefix + ".cross_attn"),
                       sub.data(), bc != nullptr ? &bc->cross_attn : nullptr);
      for (size_t i = 0; i < x.size(); ++i) x[i] += sub[i];
    }

    // Feed-forward.
    LayerNormForward(x.data(), n, d, params.tensor(prefix + ".ln2.gain"),
                     params.tensor(prefix + ".ln2.bias"), scratch.data(),
                     bc != nullptr ? &bc->ln2 : nullptr);
    FfnForward(scratch.data(), n, d, config.ffn_dim,
               params.tensor(prefix + ".ffn.w1"),
               params.tensor(prefix + ".ffn.b1"),
               params.tensor(prefix + ".ffn.w2"),
               params.tensor(prefix + ".ffn.b2"), sub.data(),
               bc != nullptr ? &bc->ffn : nullptr);
    for (size_t i = 0; i < x.size(); ++i) x[i] += sub[i];
  }

  std::vector<double> out(static_cast<size_t>(n * d));
  LayerNormForward(x.data(), n, d, params.tensor(stack + ".final_ln.gain"),
                   params.tensor(stack + ".final_ln.bias"), out.data(),
                   cache != nullptr ? &cache->final_ln : nullptr);
  if (cache != nullptr) cache->final_out = out;
  return out;
}

// LN output = norm * gain + bias, rebuilt from the cache for the backward
// pass of the block fed by that LN.
std::vector<double> ReconstructLnOutput(const LnCache& cache, int64_t n,
                                        int64_t d,
                                        std::span<const double> gain,
                                        std::span<const double> bias) {
  std::vector<double> out(static_cast<size_t>(n * d));
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < d; ++j) {
      out[static_cast<size_t>(i * d + j)] =
          cache.norm[static_cast<size_t>(i * d + j)] *
              gain[static_cast<size_t>(j)] +
          bias[static_cast<size_t>(j)];
    }
  }
  return out;
}

// Backward through a stack. `dout` is the gradient at the final-LN output;
// token/position embedding gradients are accumulated. Returns (via denc) the
// gradient with respect to the encoder output when cross attention is used.
void BackwardStack(const ModelConfig& config, const Parameters& params,
                   const std::string& stack, const std::vector<int64_t>& ids,
                   bool causal, const std::vector<double>* enc,
                   int64_t enc_len, const StackCache& cache,
                   std::vector<double> dout, std::vector<double>& grad,
                   std::vector<double>* denc) {
  const int64_t d = config.d_model;
  const int64_t n = static_cast<int64_t>(ids.size());

  std::vector<double> dx(static_cast<size_t>(n * d), 0.0);
  LayerNormBackward(cache.final_ln, n, d,
                    params.tensor(stack + ".final_ln.gain"), dout.data(),
                    GradSpan(params, grad, stack + ".final_ln.gain"),
                    GradSpan(params, grad, stack + ".final_ln.bias"),
                    dx.data());

  std::vector<double> dsub(static_cast<size_t>(n * d));
  for (int64_t layer = config.n_layers - 1; layer >= 0; --layer) {
    const std::string prefix = stack + "." + std::to_string(layer);
    const BlockCache& bc = cache.layers[static_cast<size_t>(layer)];

    // Feed-forward block: x_out = x_in + FFN(LN2(x_in)).
    std::fill(dsub.begin(), dsub.end(), 0.0);
    FfnBackward(bc.ffn, n, d, config.ffn_dim,
                params.tensor(prefix + ".ffn.w1"),
                params.tensor(prefix + ".ffn.w2"), dx.data(),
                GradSpan(params, grad, prefix + ".ffn.w1"),
                GradSpan(params, grad, prefix + ".ffn.b1"),
                GradSpan(params, grad, prefix + ".ffn.w2"),
                GradSpan(params, grad, prefix + ".ffn.b2"), dsub.data());
    LayerNormBackward(bc.ln2, n, d, params.tensor(prefix + ".ln2.gain"),
                      dsub.data(),
                      GradSpan(params, grad, prefix + ".ln2.gain"),
                      GradSpan(params, grad, prefix + ".ln2.bias"), dx.data());

    // Cross-attention block.
    if (enc != nullptr) {
      const std::vector<double> lnc_out = ReconstructLnOutput(
          bc.ln_cross, n, d, params.tensor(prefix + ".ln_cross.gain"),
          params.tensor(prefix + ".ln_cross.bias"));
      std::fill(dsub.begin(), dsub.end(), 0.0);
      AttentionBackward(
          lnc_out.data(), n, enc->data(), enc_len, d, config.n_heads,
          /*causal=*/false, AttnParamsFor(params, prefix + ".cross_attn"),
          bc.cross_attn, dx.data(),
          AttnGradsFor(params, grad, prefix + ".cross_attn"), dsub.data(),
          denc != nullptr ? denc->data() : nullptr);
      LayerNormBackward(bc.ln_cross, n, d,
                        params.tensor(prefix + ".ln_cross.gain"), dsub.data(),
                        GradSpan(params, grad, prefix + ".ln_cross.gain"),
                        GradSpan(params, grad, prefix + ".ln_cross.bias"),
                        dx.data());
    }

    // Self-attention block.
    const std::string attn_name =
        stack == "enc" ? prefix + ".attn" : prefix + ".self_attn";
    const std::vector<double> ln1_out = ReconstructLnOutput(
        bc.ln1, n, d, params.tensor(prefix + ".ln1.gain"),
        params.tensor(prefix + ".ln1.bias"));
    std::fill(dsub.begin(), dsub.end(), 0.0);
    AttentionBackward(ln1_out.data(), n, ln1_out.data(), n, d, config.n_heads,
                      causal, AttnParamsFor(params, attn_name), bc.self_attn,
                      dx.data(), AttnGradsFor(params, grad, attn_name),
                      dsub.data(), dsub.data());
    LayerNormBackward(bc.ln1, n, d, params.tensor(prefix + ".ln1.gain"),
                      dsub.data(), GradSpan(params, grad, prefix + ".ln1.gain"),
                      GradSpan(params, grad, prefix + ".ln1.bias"), dx.data());
  }

  // Embedding gradients.
  const std::string pos_name =
      stack == "enc" ? "embed.pos_enc" : "embed.pos_dec";
  std::span<double> dtok = GradSpan(params, grad, "embed.token");
  std::span<double> dpos = GradSpan(params, grad, pos_name);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t id = ids[static_cast<size_t>(i)];
    for (int64_t j = 0; j < d; ++j) {
      dtok[static_cast<size_t>(id * d + j)] += dx[static_cast<size_t>(i * d + j)];
      dpos[static_cast<size_t>(i * d + j)] += dx[static_cast<size_t>(i * d + j)];
    }
  }
}

struct DecoderIo {
  std::vector<int64_t> inputs;  // target[0 .. T-2]
  std::vector<int64_t> labels;  // target[1 .. T-1]
};

DecoderIo SplitTarget(const TokenSequence& target) {
  if (target.length() < 2) {
    throw ConfigError("target sequence needs at least two tokens");
  }
  DecoderIo io;
  io.inputs.assign(target.ids.begin(), target.ids.end() - 1);
  io.labels.assign(target.ids.begin() + 1, target.ids.end());
  return io;
}

struct FullCache {
  StackCache encoder;
  StackCache decoder;
  std::vector<double> enc_out;  // empty in decoder_only mode
  std::vector<double> logits;
};

// Shared forward path; fills logits for every decoder position.
void ForwardImpl(const ModelConfig& config, const Parameters& params,
                 const TokenSequence& condition,
                 const std::vector<int64_t>& decoder_inputs, FullCache* cache,
                 std::vector<double>& logits) {
  config.Validate();
  const bool enc_dec = config.mode == ModelConfig::Mode::kEncoderDecoder;
  std::vector<double> enc_out;
  int64_t enc_len = 0;
  if (enc_dec) {
    if (condition.length() < 1) {
      throw ConfigError("encoder_decoder mode requires a non-empty condition");
    }
    enc_len = condition.length();
    enc_out = RunStack(config, params, "enc", condition.ids,
                       /*causal=*/false, nullptr, 0,
                       cache != nullptr ? &cache->encoder : nullptr);
  }
  const std::vector<double> dec_out =
      RunStack(config, params, "dec", decoder_inputs, /*causal=*/true,
               enc_dec ? &enc_out : nullptr, enc_len,
               cache != nullptr ? &cache->decoder : nullptr);
  const int64_t n = static_cast<int64_t>(decoder_inputs.size());
  logits.assign(static_cast<size_t>(n * config.vocab_size), 0.0);
  Linear(dec_out.data(), n, config.d_model, params.tensor("out.w"),
         params.tensor("out.b"), logits.data(), config.vocab_size);
  if (cache != nullptr) {
    cache->enc_out = std::move(enc_out);
    cache->logits = logits;
  }
}

}  // namespace

ForwardResult ForwardLoss(const ModelConfig& config, const Parameters& params,
                          const TokenSequence& condition,
                          const TokenSequence& target) {
  const DecoderIo io = SplitTarget(target);
  ForwardResult result;
  ForwardImpl(config, params, condition, io.inputs, nullptr, result.logits);
  const int64_t v = config.vocab_size;
  double total = 0.0;
  for (size_t i = 0; i < io.labels.size(); ++i) {
    const int64_t label = io.labels[i];
    if (label == Vocabulary::kPad) continue;
    const std::span<const double> row(
        result.logits.data() + static_cast<int64_t>(i) * v,
        static_cast<size_t>(v));
    total += LogSumExpRow(row) - row[static_cast<size_t>(label)];
    ++result.loss_positions;
  }
  result.loss =
      result.loss_positions > 0
          ? total / static_cast<double>(result.loss_positions)
          : 0.0;
  if (!std::isfinite(result.loss)) {
    throw NumericError("non-finite loss in forward pass");
  }
  return result;
}

std::vector<double> PerExampleGradient(const ModelConfig& config,
                                       const Parameters& params,
                                       const TokenSequence& condition,
                                       const TokenSequence& target,
                                       double* loss_out) {
  const DecoderIo io = SplitTarget(target);
  FullCache cache;
  std::vector<double> logits;
  ForwardImpl(config, params, condition, io.inputs, &cache, logits);

  const int64_t n = static_cast<int64_t>(io.inputs.size());
  const int64_t v = config.vocab_size;
  const int64_t d = config.d_model;

  int64_t loss_positions = 0;
  for (const int64_t label : io.labels) {
    if (label != Vocabulary::kPad) ++loss_positions;
  }
  std::vector<double> grad(static_cast<size_t>(params.size()), 0.0);
  double total_loss = 0.0;
  if (loss_positions == 0) {
    if (loss_out != nullptr) *loss_out = 0.0;
    return grad;  // all-PAD target: no loss positions, zero gradient
  }

  // dlogits = (softmax - onehot) / loss_positions on loss rows.
  std::vector<double> dlogits(static_cast<size_t>(n * v), 0.0);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t label = io.labels[static_cast<size_t>(i)];
    if (label == Vocabulary::kPad) continue;
    const std::span<const double> row(logits.data() + i * v,
                                      static_cast<size_t>(v));
    const double lse = LogSumExpRow(row);
    total_loss += lse - row[static_cast<size_t>(label)];
    double* drow = dlogits.data() + i * v;
    for (int64_t c = 0; c < v; ++c) {
      drow[c] = std::exp(row[static_cast<size_t>(c)] - lse) /
                static_cast<double>(loss_positions);
    }
    drow[label] -= 1.0 / static_cast<double>(loss_positions);
  }
  if (loss_out != nullptr) {
    *loss_out = total_loss / static_cast<double>(loss_positions);
  }

  // Output projection.
  std::vector<double> ddec(static_cast<size_t>(n * d), 0.0);
  LinearBackward(cache.decoder.final_out.data(), n, d, params.tensor("out.w"),
                 dlogits.data(), v, GradSpan(params, grad, "out.w"),
                 GradSpan(params, grad, "out.b"), ddec.data());

  const bool enc_dec = config.mode == ModelConfig::Mode::kEncoderDecoder;
  std::vector<double> denc;
  if (enc_dec) {
    denc.assign(static_cast<size_t>(condition.length() * d), 0.0);
  }
  BackwardStack(config, params, "dec", io.inputs, /*causal=*/true,
                enc_dec ? &cache.enc_out : nullptr,
                enc_dec ? condition.length() : 0, cache.decoder,
                std::move(ddec), grad, enc_dec ? &denc : nullptr);
  if (enc_dec) {
    BackwardStack(config, params, "enc", condition.ids, /*causal=*/false,
                  nullptr, 0, cache.encoder, std::move(denc), grad, nullptr);
  }
  for (const double g : grad) {
    if (!std::isfinite(g)) {
      throw NumericError("non-finite value in per-example gradient");
    }
  }
  return grad;
}

std::vector<double> DecoderLogits(const ModelConfig& config,
                                  const Parameters& params,
                                  const TokenSequence& condition,
                                  const std::vector<int64_t>& decoder_prefix) {
  if (decoder_prefix.empty()) {
    throw ConfigError("decoder prefix must be non-empty");
  }
  std::vector<double> logits;
  ForwardImpl(config, params, condition, decoder_prefix, nullptr, logits);
  return logits;
}

}  // namespace model
}  // namespace ctcl
