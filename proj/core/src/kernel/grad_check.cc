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

#include "budgetlab/kernel/grad_check.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/kernel/autodiff.h"
#include "budgetlab/kernel/model.h"

namespace budgetlab::kernel {
namespace {

using Apply = std::function<Var(Tape&, std::span<const Var>)>;

struct Shape2 {
  std::size_t rows;
  std::size_t cols;
};

struct OpSpec {
  std::string id;
  std::vector<Shape2> shapes;
  Apply apply;
  // Optional custom point builder; shapes are used with N(0, 1) otherwise.
  std::function<std::vector<Tensor>(std::mt19937_64&)> make_point;
};

const std::vector<std::int64_t> kTokens = {3, 0, 5, 3, 1};
const std::vector<std::int64_t> kTargets = {0, 5, 3, 1, 2};

KernelConfig tiny_config(Positional positional, Activation activation, bool embed_norm) {
  KernelConfig c;
  c.n_layer = 1;
  c.d_model = 8;
  c.n_heads = 2;
  c.head_dim = 4;
  c.d_ff = 12;
  c.n_ctx_train = 8;
  c.vocab = 6;
  c.positional = positional;
  c.activation = activation;
  c.embed_norm = embed_norm;
  return c;
}

OpSpec attention_op(std::string id, Positional positional) {
  OpSpec op;
  op.id = std::move(id);
  op.shapes = {{5, 8}, {5, 8}, {5, 8}};
  op.apply = [positional](Tape& t, std::span<const Var> in) {
    Var q = in[0];
    Var k = in[1];
    std::vector<std::int64_t> pos(q.value().rows());
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<std::int64_t>(i);
    if (positional == Positional::kRotary) {
      q = t.rotary(q, 2, 4, pos, 1e4);
      k = t.rotary(k, 2, 4, pos, 1e4);
    }
    AlibiSlopes slopes = alibi_slopes(2);
    return t.causal_attention(q, k, in[2], 2, 4,
                              positional == Positional::kAlibi ? &slopes : nullptr);
  };
  return op;
}

OpSpec tiny_lm_op(std::string id, KernelConfig config) {
  OpSpec op;
  op.id = std::move(id);
  op.make_point = [config](std::mt19937_64& rng) {
    TinyLm model(config, rng());
    // Perturb the unit gains and zero biases so every parameter is exercised
    // away from its initial value.
    std::normal_distribution<double> jitter(0.0, 0.1);
    std::vector<Tensor> params = model.parameters();
    for (Tensor& p : params) {
      for (double& v : p.data()) v += jitter(rng);
    }
    return params;
  };
  op.apply = [config](Tape& t, std::span<const Var> in) {
    const TinyLm model(config, 0);
    return t.cross_entropy(model.forward(t, in, kTokens), kTargets);
  };
  return op;
}

const std::vector<OpSpec>& registry() {
  static const std::vector<OpSpec> ops = [] {
    std::vector<OpSpec> r;
    r.push_back({"linear", {{2, 3}, {3, 2}, {1, 2}},
                 [](Tape& t, std::span<const Var> in) {
                   return t.add_row(t.matmul(in[0], in[1]), in[2]);
                 },
                 [](std::mt19937_64& rng) {
                   // Same-signed entries keep every gradient coordinate well away
                   // from zero, so the difference quotient is not dominated by
                   // cancellation.
                   std::uniform_real_distribution<double> dist(0.5, 1.5);
                   std::vector<Tensor> point{Tensor(2, 3), Tensor(3, 2), Tensor(1, 2)};
                   for (Tensor& t : point) {
                     for (double& v : t.data()) v = dist(rng);
                   }
                   return point;
                 }});
    r.push_back({"gelu", {{1, 4}},
                 [](Tape& t, std::span<const Var> in) { return t.gelu(in[0]); },
                 [](std::mt19937_64&) {
                   return std::vector<Tensor>{Tensor(1, 4, {-2.0, -0.5, 0.1, 3.0})};
                 }});
    r.push_back({"swish", {{2, 5}},
                 [](Tape& t, std::span<const Var> in) { return t.swish(in[0]); }, nullptr});
    r.push_back({"softmax", {{3, 5}},
                 [](Tape& t, std::span<const Var> in) { return t.softmax(in[0]); }, nullptr});
    r.push_back({"layer_norm", {{3, 6}, {1, 6}, {1, 6}},
                 [](Tape& t, std::span<const Var> in) {
                   return t.layer_norm(in[0], in[1], in[2]);
                 },
                 nullptr});
    r.push_back({"gelu_ffn", {{3, 4}, {4, 6}, {1, 6}, {6, 4}, {1, 4}},
                 [](Tape& t, std::span<const Var> in) {
                   Var h = t.gelu(t.add_row(t.matmul(in[0], in[1]), in[2]));
                   return t.add_row(t.matmul(h, in[3]), in[4]);
                 },
                 nullptr});
    r.push_back({"swiglu_ffn", {{3, 4}, {4, 6}, {4, 6}, {6, 4}},
                 [](Tape& t, std::span<const Var> in) {
                   Var gated = t.mul(t.swish(t.matmul(in[0], in[1])), t.matmul(in[0], in[2]));
                   return t.matmul(gated, in[3]);
                 },
                 nullptr});
    r.push_back({"embedding", {{6, 4}},
                 [](Tape& t, std::span<const Var> in) { return t.embedding(in[0], kTokens); },
                 nullptr});
    r.push_back({"embedding_norm", {{6, 4}, {1, 4}, {1, 4}},
                 [](Tape& t, std::span<const Var> in) {
                   return t.layer_norm(t.embedding(in[0], kTokens), in[1], in[2]);
                 },
                 nullptr});
    r.push_back({"tied_logits", {{5, 4}, {6, 4}},
                 [](Tape& t, std::span<const Var> in) {
                   return t.matmul_transposed(in[0], in[1]);
                 },
                 nullptr});
    r.push_back({"cross_entropy", {{5, 6}},
                 [](Tape& t, std::span<const Var> in) {
                   return t.cross_entropy(in[0], kTargets);
                 },
                 nullptr});
    r.push_back(attention_op("attention_none", Positional::kNone));
    r.push_back(attention_op("attention_rotary", Positional::kRotary));
    r.push_back(attention_op("attention_alibi", Positional::kAlibi));
    r.push_back(tiny_lm_op("tiny_lm_none", tiny_config(Positional::kNone, Activation::kGelu, false)));
    r.push_back(tiny_lm_op("tiny_lm_learned",
                           tiny_config(Positional::kLearned, Activation::kGelu, true)));
    r.push_back(tiny_lm_op("tiny_lm_rotary",
                           tiny_config(Positional::kRotary, Activation::kSwiGlu, false)));
    r.push_back(tiny_lm_op("tiny_lm_alibi",
                           tiny_config(Positional::kAlibi, Activation::kSwiGlu, true)));
    return r;
  }();
  return ops;
}

const OpSpec& find_op(std::string_view id) {
  for (const OpSpec& op : registry()) {
    if (op.id == id) return op;
  }
  throw ConfigError(fmt::format("unknown grad_check op '{}'", id));
}

// Reduces a tensor output to a scalar with positive weights that depend only on the
// output shape, so analytic and numeric passes see the same function.
Var reduce(Tape& tape, Var out) {
  if (out.value().size() == 1) return out;
  std::mt19937_64 rng(0x5eedULL + out.value().size());
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  Tensor w(out.value().shape());
  for (double& v : w.data()) v = dist(rng);
  return tape.weighted_sum(out, w);
}

double evaluate(const OpSpec& op, const std::vector<Tensor>& point) {
  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : point) vars.push_back(tape.leaf(t));
  return reduce(tape, op.apply(tape, vars)).value()[0];
}

}  // namespace

std::vector<std::string> grad_check_ops() {
  std::vector<std::string> ids;
  for (const OpSpec& op : registry()) ids.push_back(op.id);
  return ids;
}

std::vector<Tensor> default_grad_point(std::string_view op_id, std::uint64_t seed) {
  const OpSpec& op = find_op(op_id);
  std::mt19937_64 rng(seed);
  if (op.make_point) return op.make_point(rng);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<Tensor> point;
  for (const Shape2& s : op.shapes) {
    Tensor t(s.rows, s.cols);
    for (double& v : t.data()) v = dist(rng);
    point.push_back(std::move(t));
  }
  return point;
}

GradCheckReport evaluate_grad_check(std::string_view op_id, const std::vector<Tensor>& point,
                                    double tolerance) {
  const OpSpec& op = find_op(op_id);
  GradCheckReport report;
  report.op_id = op.id;
  report.tolerance = tolerance;

  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : point) vars.push_back(tape.leaf(t));
  const Var out = reduce(tape, op.apply(tape, vars));
  if (!std::isfinite(out.value()[0])) throw CheckFailure(op.id + ": non-finite output");
  tape.backward(out);

  std::vector<Tensor> probe = point;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const Tensor& analytic = vars[i].grad();
    for (std::size_t j = 0; j < point[i].size(); ++j) {
      const double x0 = point[i][j];
      probe[i][j] = x0 + kFiniteDifferenceStep;
      const double up = evaluate(op, probe);
      probe[i][j] = x0 - kFiniteDifferenceStep;
      const double down = evaluate(op, probe);
      probe[i][j] = x0;
      const double numeric = (up - down) / (2.0 * kFiniteDifferenceStep);
      const double a = analytic[j];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      const double rel = std::abs(a - numeric) / denom;
      ++report.coordinates;
      report.max_relative_error = std::max(report.max_relative_error, rel);
      if (!(rel <= tolerance)) {
        const std::size_t cols = point[i].cols();
        report.offenders.push_back(
            {fmt::format("input{}[{},{}]", i, j / cols, j % cols), a, numeric, rel});
      }
    }
  }
  return report;
}

GradCheckReport grad_check(std::string_view op_id, const std::vector<Tensor>& point,
                           double tolerance) {
  GradCheckReport report = evaluate_grad_check(op_id, point, tolerance);
  if (!report.passed()) {
    std::string msg = fmt::format("{}: {} coordinate(s) above tolerance {:g}:", report.op_id,
                                  report.offenders.size(), tolerance);
    for (const GradMismatch& m : report.offenders) {
      msg += fmt::format(" {} (analytic {:.6g}, numeric {:.6g}, rel {:.3g})", m.coordinate,
                         m.analytic, m.numeric, m.relative_error);
    }
    throw CheckFailure(msg);
  }
  return report;
}

}  // namespace budgetlab::kernel
