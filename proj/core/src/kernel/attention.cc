// Copyright 2026 The budgetlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "budgetlab/kernel/attention.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "budgetlab/error.h"

namespace budgetlab::kernel {
namespace {

Tensor random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Tensor t(rows, cols);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

Tensor add_row(Tensor x, const Tensor& row) {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) += row[c];
  }
  return x;
}

}  // namespace

AttentionWeights AttentionWeights::Random(const KernelConfig& config, std::mt19937_64& rng,
                                          double scale) {
  const auto d = static_cast<std::size_t>(config.d_model);
  AttentionWeights w;
  w.wq = random_matrix(d, d, rng, scale);
  w.wk = random_matrix(d, d, rng, scale);
  w.wv = random_matrix(d, d, rng, scale);
  w.wo = random_matrix(d, d, rng, scale);
  w.bq = random_matrix(1, d, rng, scale);
  w.bk = random_matrix(1, d, rng, scale);
  w.bv = random_matrix(1, d, rng, scale);
  w.bo = random_matrix(1, d, rng, scale);
  return w;
}

AttentionCore causal_attention_core(const Tensor& q, const Tensor& k, const Tensor& v,
                                    std::int64_t n_heads, std::int64_t head_dim,
                                    const AlibiSlopes* slopes) {
  const std::size_t seq = q.rows();
  const auto hd = static_cast<std::size_t>(head_dim);
  if (!q.same_shape(k) || !q.same_shape(v) ||
      q.cols() != static_cast<std::size_t>(n_heads) * hd) {
    throw ConfigError("attention inputs must all be seq x n_heads*head_dim");
  }
  if (slopes != nullptr && slopes->slopes.size() != static_cast<std::size_t>(n_heads)) {
    throw ConfigError("one ALiBi slope per head required");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(hd));

  AttentionCore core;
  core.output = Tensor(seq, q.cols());
  core.probs.reserve(static_cast<std::size_t>(n_heads));
  std::vector<double> logits(seq);
  for (std::size_t h = 0; h < static_cast<std::size_t>(n_heads); ++h) {
    const std::size_t off = h * hd;
    const double m = slopes ? slopes->slopes[h] : 0.0;
    Tensor p(seq, seq);
    for (std::size_t i = 0; i < seq; ++i) {
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j <= i; ++j) {
        double dot = 0.0;
        for (std::size_t c = 0; c < hd; ++c) dot += q(i, off + c) * k(j, off + c);
        logits[j] = dot * scale - m * static_cast<double>(i - j);
        peak = std::max(peak, logits[j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        logits[j] = std::exp(logits[j] - peak);
        sum += logits[j];
      }
      for (std::size_t j = 0; j <= i; ++j) {
        const double w = logits[j] / sum;
        p(i, j) = w;
        for (std::size_t c = 0; c < hd; ++c) core.output(i, off + c) += w * v(j, off + c);
      }
    }
    core.probs.push_back(std::move(p));
  }
  return core;
}

AttentionCore attention_forward_with_probs(const KernelConfig& config,
                                           const Tensor& hidden_states,
                                           const AttentionWeights& weights) {
  config.validate();
  if (hidden_states.cols() != static_cast<std::size_t>(config.d_model)) {
    throw ConfigError("hidden states must be seq x d_model");
  }
  const std::size_t seq = hidden_states.rows();
  if (config.positional == Positional::kLearned &&
      seq > static_cast<std::size_t>(config.n_ctx_train)) {
    throw ExtrapolationUnsupportedError(
        "learned positional embeddings cover " + std::to_string(config.n_ctx_train) +
        " positions; got a sequence of " + std::to_string(seq));
  }

  Tensor q = add_row(matmul(hidden_states, weights.wq), weights.bq);
  Tensor k = add_row(matmul(hidden_states, weights.wk), weights.bk);
  const Tensor v = add_row(matmul(hidden_states, weights.wv), weights.bv);
  if (config.positional == Positional::kRotary) {
    std::vector<std::int64_t> positions(seq);
    std::iota(positions.begin(), positions.end(), 0);
    q = rotary_apply_heads(q, config.n_heads, config.head_dim, positions, config.rotary_base);
    k = rotary_apply_heads(k, config.n_heads, config.head_dim, positions, config.rotary_base);
  }
  AlibiSlopes slopes;
  if (config.positional == Positional::kAlibi) slopes = alibi_slopes(config.n_heads);

  AttentionCore core =
      causal_attention_core(q, k, v, config.n_heads, config.head_dim,
                            config.positional == Positional::kAlibi ? &slopes : nullptr);
  core.output = add_row(matmul(core.output, weights.wo), weights.bo);
  return core;
}

Tensor attention_forward(const KernelConfig& config, const Tensor& hidden_states,
                         const AttentionWeights& weights) {
  return attention_forward_with_probs(config, hidden_states, weights).output;
}

}  // namespace budgetlab::kernel
