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

#include "budgetlab/kernel/model.h"

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "budgetlab/error.h"
#include "budgetlab/kernel/functions.h"

namespace budgetlab::kernel {
namespace {

Tensor normal(std::size_t rows, std::size_t cols, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Tensor t(rows, cols);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

}  // namespace

std::size_t TinyLm::add_param(std::string name, Tensor value) {
  params_.push_back(std::move(value));
  names_.push_back(std::move(name));
  return params_.size() - 1;
}

TinyLm::TinyLm(KernelConfig config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const auto d = static_cast<std::size_t>(config_.d_model);
  const auto f = static_cast<std::size_t>(config_.d_ff);
  const auto vocab = static_cast<std::size_t>(config_.vocab);
  const double w_std = 1.0 / std::sqrt(static_cast<double>(d));
  const double out_std = w_std / std::sqrt(2.0 * static_cast<double>(config_.n_layer));

  add_param("embed.tokens", normal(vocab, d, 0.5, rng));
  if (config_.positional == Positional::kLearned) {
    add_param("embed.positions",
              normal(static_cast<std::size_t>(config_.n_ctx_train), d, 0.1, rng));
  }
  if (config_.embed_norm) {
    add_param("embed.norm.gain", Tensor(1, d, 1.0));
    add_param("embed.norm.bias", Tensor(1, d, 0.0));
  }
  for (std::int64_t l = 0; l < config_.n_layer; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    add_param(p + "ln1.gain", Tensor(1, d, 1.0));
    add_param(p + "ln1.bias", Tensor(1, d, 0.0));
    add_param(p + "attn.wq", normal(d, d, w_std, rng));
    add_param(p + "attn.bq", Tensor(1, d, 0.0));
    add_param(p + "attn.wk", normal(d, d, w_std, rng));
    add_param(p + "attn.bk", Tensor(1, d, 0.0));
    add_param(p + "attn.wv", normal(d, d, w_std, rng));
    add_param(p + "attn.bv", Tensor(1, d, 0.0));
    add_param(p + "attn.wo", normal(d, d, out_std, rng));
    add_param(p + "attn.bo", Tensor(1, d, 0.0));
    add_param(p + "ln2.gain", Tensor(1, d, 1.0));
    add_param(p + "ln2.bias", Tensor(1, d, 0.0));
    if (config_.activation == Activation::kSwiGlu) {
      add_param(p + "ffn.w", normal(d, f, w_std, rng));
      add_param(p + "ffn.v", normal(d, f, w_std, rng));
      add_param(p + "ffn.w2", normal(f, d, out_std, rng));
    } else {
      add_param(p + "ffn.w1", normal(d, f, w_std, rng));
      add_param(p + "ffn.b1", Tensor(1, f, 0.0));
      add_param(p + "ffn.w2", normal(f, d, out_std, rng));
      add_param(p + "ffn.b2", Tensor(1, d, 0.0));
    }
  }
  add_param("final_norm.gain", Tensor(1, d, 1.0));
  add_param("final_norm.bias", Tensor(1, d, 0.0));
}

std::size_t TinyLm::parameter_count() const {
  std::size_t n = 0;
  for (const Tensor& t : params_) n += t.size();
  return n;
}

std::vector<Var> TinyLm::bind(Tape& tape) const {
  std::vector<Var> vars;
  vars.reserve(params_.size());
  for (const Tensor& t : params_) vars.push_back(tape.leaf(t));
  return vars;
}

Var TinyLm::forward(Tape& tape, std::span<const Var> params,
                    std::span<const std::int64_t> tokens) const {
  if (params.size() != params_.size()) throw ConfigError("parameter handle count mismatch");
  const std::size_t seq = tokens.size();
  if (seq == 0) throw ValidationError("empty token sequence");
  if (config_.positional == Positional::kLearned &&
      seq > static_cast<std::size_t>(config_.n_ctx_train)) {
    throw ExtrapolationUnsupportedError(
        "learned positions stop at " + std::to_string(config_.n_ctx_train) +
        "; sequence has " + std::to_string(seq) + " tokens");
  }
  std::vector<std::int64_t> positions(seq);
  std::iota(positions.begin(), positions.end(), 0);

  std::size_t next = 0;
  auto take = [&]() { return params[next++]; };

  const Var tok_table = take();
  Var x = tape.embedding(tok_table, tokens);
  if (config_.positional == Positional::kLearned) x = tape.add(x, tape.embedding(take(), positions));
  if (config_.embed_norm) {
    const Var g = take();
    const Var b = take();
    x = tape.layer_norm(x, g, b);
  }

  AlibiSlopes slopes;
  if (config_.positional == Positional::kAlibi) slopes = alibi_slopes(config_.n_heads);
  const AlibiSlopes* slope_ptr = config_.positional == Positional::kAlibi ? &slopes : nullptr;

  for (std::int64_t l = 0; l < config_.n_layer; ++l) {
    const Var ln1_g = take();
    const Var ln1_b = take();
    Var h = tape.layer_norm(x, ln1_g, ln1_b);
    const Var wq = take();
    const Var bq = take();
    const Var wk = take();
    const Var bk = take();
    const Var wv = take();
    const Var bv = take();
    const Var wo = take();
    const Var bo = take();
    Var q = tape.add_row(tape.matmul(h, wq), bq);
    Var k = tape.add_row(tape.matmul(h, wk), bk);
    const Var v = tape.add_row(tape.matmul(h, wv), bv);
    if (config_.positional == Positional::kRotary) {
      q = tape.rotary(q, config_.n_heads, config_.head_dim, positions, config_.rotary_base);
      k = tape.rotary(k, config_.n_heads, config_.head_dim, positions, config_.rotary_base);
    }
    Var a = tape.causal_attention(q, k, v, config_.n_heads, config_.head_dim, slope_ptr);
    x = tape.add(x, tape.add_row(tape.matmul(a, wo), bo));

    const Var ln2_g = take();
    const Var ln2_b = take();
    h = tape.layer_norm(x, ln2_g, ln2_b);
    Var ff;
    if (config_.activation == Activation::kSwiGlu) {
      const Var w = take();
      const Var vv = take();
      const Var w2 = take();
      ff = tape.matmul(tape.mul(tape.swish(tape.matmul(h, w)), tape.matmul(h, vv)), w2);
    } else {
      const Var w1 = take();
      const Var b1 = take();
      const Var w2 = take();
      const Var b2 = take();
      ff = tape.add_row(tape.matmul(tape.gelu(tape.add_row(tape.matmul(h, w1), b1)), w2), b2);
    }
    x = tape.add(x, ff);
  }
  const Var fg = take();
  const Var fb = take();
  x = tape.layer_norm(x, fg, fb);
  return tape.matmul_transposed(x, tok_table);
}

Tensor TinyLm::logits(std::span<const std::int64_t> tokens) const {
  Tape tape;
  const auto vars = bind(tape);
  return forward(tape, vars, tokens).value();
}

double TinyLm::loss(std::span<const std::int64_t> tokens, std::span<const std::int64_t> targets,
                    std::span<const double> weights) const {
  Tape tape;
  const auto vars = bind(tape);
  return tape.cross_entropy(forward(tape, vars, tokens), targets, weights).value()[0];
}

Adam::Adam(const std::vector<Tensor>& params, AdamOptions options) : options_(options) {
  for (const Tensor& p : params) {
    m_.emplace_back(p.shape());
    v_.emplace_back(p.shape());
  }
}

void Adam::step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, double lr_scale) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ConfigError("Adam: parameter/gradient count mismatch");
  }
  double clip = 1.0;
  if (options_.grad_clip > 0.0) {
    double norm2 = 0.0;
    for (const Tensor& g : grads) {
      for (double x : g.data()) norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    if (!std::isfinite(norm)) throw Error("non-finite gradient norm");
    if (norm > options_.grad_clip) clip = options_.grad_clip / norm;
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  const double lr = options_.learning_rate * lr_scale;
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t j = 0; j < params[i].size(); ++j) {
      const double g = grads[i][j] * clip;
      m_[i][j] = options_.beta1 * m_[i][j] + (1.0 - options_.beta1) * g;
      v_[i][j] = options_.beta2 * v_[i][j] + (1.0 - options_.beta2) * g * g;
      params[i][j] -= lr * (m_[i][j] / bc1) / (std::sqrt(v_[i][j] / bc2) + options_.epsilon);
    }
  }
}

}  // namespace budgetlab::kernel
