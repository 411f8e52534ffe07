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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "budgetlab/error.h"
#include "budgetlab/kernel/attention.h"
#include "budgetlab/kernel/checks.h"
#include "budgetlab/kernel/config.h"
#include "budgetlab/kernel/embedding.h"
#include "budgetlab/kernel/extrapolation.h"
#include "budgetlab/kernel/ffn.h"
#include "budgetlab/kernel/functions.h"
#include "budgetlab/kernel/grad_check.h"
#include "budgetlab/kernel/model.h"

namespace budgetlab::kernel {
namespace {

Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Tensor t(rows, cols);
  for (auto& v : t.data()) v = n(rng);
  return t;
}

KernelConfig tiny_config(Positional positional) {
  KernelConfig c;
  c.n_layer = 1;
  c.d_model = 8;
  c.n_heads = 2;
  c.head_dim = 4;
  c.d_ff = 16;
  c.n_ctx_train = 8;
  c.vocab = 11;
  c.positional = positional;
  return c;
}

TEST(Alibi, Slopes) {
  EXPECT_EQ(alibi_slopes(1).slopes, std::vector<double>{0.00390625});
  const auto eight = alibi_slopes(8).slopes;
  ASSERT_EQ(eight.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(eight[i], std::ldexp(1.0, -static_cast<int>(i) - 1));
  for (const std::int64_t n : {2, 4, 16, 32}) {
    const auto s = alibi_slopes(n).slopes;
    EXPECT_DOUBLE_EQ(s.back(), 1.0 / 256.0) << n;
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_DOUBLE_EQ(s[i] / s[i - 1], s[1] / s[0]);
  }
  EXPECT_THROW(alibi_slopes(0), ConfigError);
}

TEST(Alibi, BiasStructure) {
  const auto bias = alibi_bias(AlibiSlopes{{0.5}}, 6, 6);
  ASSERT_EQ(bias.size(), 1u);
  EXPECT_EQ(bias[0](4, 1), -1.5);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(bias[0](i, i), 0.0);
    for (std::size_t j = i + 1; j < 6; ++j) EXPECT_TRUE(std::isinf(bias[0](i, j)));
  }
  const auto tail = alibi_bias(AlibiSlopes{{0.25}}, 2, 5);
  EXPECT_EQ(tail[0](0, 0), -0.75);
  EXPECT_EQ(tail[0](1, 4), 0.0);
  EXPECT_THROW(alibi_bias(AlibiSlopes{{1.0}}, 3, 2), ConfigError);
}

TEST(Rotary, IdentityAtZeroAndNormPreserving) {
  std::mt19937_64 rng(4);
  const Tensor x = random_tensor(6, 16, rng);
  const std::vector<std::int64_t> zeros(6, 0);
  EXPECT_EQ(rotary_apply(x, zeros), x);
  const std::vector<std::int64_t> pos{1, 5, 17, 100, 1000, 4095};
  const Tensor y = rotary_apply(x, pos);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double a = 0.0, b = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) {
      a += x(r, c) * x(r, c);
      b += y(r, c) * y(r, c);
    }
    EXPECT_NEAR(std::sqrt(a), std::sqrt(b), 1e-12);
  }
  const Tensor back = rotary_apply_heads(y, 1, 16, pos, 1e4, /*inverse=*/true);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(Rotary, PairRotationOracle) {
  // head_dim 2: a plain 2-D rotation by the position itself.
  const Tensor x = Tensor::FromRows({{1.0, 0.0}, {0.0, 2.0}});
  const std::vector<std::int64_t> pos{1, 3};
  const Tensor y = rotary_apply(x, pos);
  EXPECT_NEAR(y(0, 0), std::cos(1.0), 1e-15);
  EXPECT_NEAR(y(0, 1), std::sin(1.0), 1e-15);
  EXPECT_NEAR(y(1, 0), -2.0 * std::sin(3.0), 1e-15);
  EXPECT_NEAR(y(1, 1), 2.0 * std::cos(3.0), 1e-15);
}

TEST(Rotary, RelativePositionDependence) {
  std::mt19937_64 rng(8);
  const Tensor q = random_tensor(1, 8, rng);
  const Tensor k = random_tensor(1, 8, rng);
  auto dot_at = [&](std::int64_t m, std::int64_t n) {
    const std::vector<std::int64_t> pm{m}, pn{n};
    const Tensor a = rotary_apply(q, pm);
    const Tensor b = rotary_apply(k, pn);
    return std::inner_product(a.data().begin(), a.data().end(), b.data().begin(), 0.0);
  };
  for (const std::int64_t shift : {1, 7, 100}) {
    EXPECT_NEAR(dot_at(9, 4), dot_at(9 + shift, 4 + shift), 1e-10);
  }
}

TEST(Rotary, Errors) {
  const Tensor odd(2, 3);
  const std::vector<std::int64_t> pos{0, 1};
  EXPECT_THROW(rotary_apply(odd, pos), ConfigError);
  const Tensor even(2, 4);
  const std::vector<std::int64_t> short_pos{0};
  EXPECT_THROW(rotary_apply(even, short_pos), ConfigError);
  auto c = tiny_config(Positional::kRotary);
  c.head_dim = 3;
  c.n_heads = 1;
  c.d_model = 3;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Activations, Gelu) {
  EXPECT_NEAR(gelu(1.0), 0.8413, 1e-4);
  EXPECT_EQ(gelu(0.0), 0.0);
  for (const double x : {-5.0, -1.3, -0.2, 0.4, 2.2, 7.0}) {
    EXPECT_NEAR(gelu(x) - gelu(-x), x, 1e-14);
    const double h = 1e-6;
    EXPECT_NEAR(gelu_derivative(x), (gelu(x + h) - gelu(x - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(swish_derivative(x), (swish(x + h) - swish(x - h)) / (2 * h), 1e-8);
  }
  EXPECT_NEAR(swish(1.0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(Softmax, RowsSumToOne) {
  Tensor t = Tensor::FromRows({{1.0, 2.0, 3.0}, {1000.0, 1000.0, -1000.0}});
  softmax_rows(t);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_NEAR(t(r, 0) + t(r, 1) + t(r, 2), 1.0, 1e-15);
  }
  EXPECT_NEAR(t(1, 0), 0.5, 1e-15);
}

TEST(SwiGlu, HiddenSize) {
  EXPECT_EQ(swiglu_hidden_size(2048), 5456);
  EXPECT_EQ(swiglu_hidden_size(14336), 38224);
  EXPECT_EQ(swiglu_hidden_size(3, 1), 8);
  EXPECT_EQ(swiglu_hidden_size(6, 1), 16);
  for (std::int64_t d = 64; d <= 8192; d += 64) {
    const auto h = swiglu_hidden_size(d);
    EXPECT_EQ(h % 16, 0);
    EXPECT_LE(std::abs(static_cast<double>(h) - 8.0 * d / 3.0), 8.0);
  }
  EXPECT_THROW(swiglu_hidden_size(0), DomainError);
}

TEST(SwiGlu, ScalarOracle) {
  std::mt19937_64 rng(12);
  const Tensor x = random_tensor(3, 4, rng);
  const Tensor w = random_tensor(4, 6, rng);
  const Tensor v = random_tensor(4, 6, rng);
  const Tensor w2 = random_tensor(6, 4, rng);
  const Tensor out = swiglu_ffn(x, w, v, w2);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t o = 0; o < 4; ++o) {
      double acc = 0.0;
      for (std::size_t h = 0; h < 6; ++h) {
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
          a += x(r, i) * w(i, h);
          b += x(r, i) * v(i, h);
        }
        acc += a / (1.0 + std::exp(-a)) * b * w2(h, o);
      }
      EXPECT_NEAR(out(r, o), acc, 1e-12);
    }
  }
  EXPECT_EQ(swiglu_ffn(Tensor(2, 4), w, v, w2), Tensor(2, 4));
  // A zero value branch switches the whole block off.
  EXPECT_EQ(swiglu_ffn(x, w, Tensor(4, 6), w2), Tensor(3, 4));
  EXPECT_THROW(swiglu_ffn(x, w, random_tensor(4, 5, rng), w2), ConfigError);
}

TEST(GeluFfn, ShapeErrors) {
  std::mt19937_64 rng(2);
  const Tensor x = random_tensor(2, 4, rng);
  EXPECT_NO_THROW(gelu_ffn(x, Tensor(4, 8), Tensor(1, 8), Tensor(8, 4), Tensor(1, 4)));
  EXPECT_THROW(gelu_ffn(x, Tensor(4, 8), Tensor(1, 7), Tensor(8, 4), Tensor(1, 4)), ConfigError);
}

TEST(Embedding, LookupNormAndTiedHead) {
  std::mt19937_64 rng(6);
  const Tensor table = random_tensor(10, 8, rng, 3.0);
  const std::vector<std::int64_t> tokens{3, 0, 9, 3};
  const Tensor plain = embedding_forward(tokens, table);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(plain(i, c), table(tokens[i], c));
  }
  const EmbeddingNorm norm{Tensor(1, 8, 1.0), Tensor(1, 8, 0.0)};
  const Tensor normed = embedding_forward(tokens, table, &norm);
  for (std::size_t r = 0; r < normed.rows(); ++r) {
    double mean = 0.0, var = 0.0;
    for (std::size_t c = 0; c < 8; ++c) mean += normed(r, c) / 8.0;
    for (std::size_t c = 0; c < 8; ++c) var += (normed(r, c) - mean) * (normed(r, c) - mean) / 8.0;
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(var, 1.0, 1e-5);
  }
  const Tensor logits = tied_logits(plain, table);
  ASSERT_EQ(logits.rows(), 4u);
  ASSERT_EQ(logits.cols(), 10u);
  double dot = 0.0;
  for (std::size_t c = 0; c < 8; ++c) dot += plain(2, c) * table(5, c);
  EXPECT_NEAR(logits(2, 5), dot, 1e-12);

  const std::vector<std::int64_t> bad{10};
  EXPECT_THROW(embedding_forward(bad, table), ValidationError);
  const std::vector<std::int64_t> negative{-1};
  EXPECT_THROW(embedding_forward(negative, table), ValidationError);
}

TEST(Attention, CausalMaskAndRowSums) {
  std::mt19937_64 rng(14);
  for (const auto p : {Positional::kNone, Positional::kRotary, Positional::kAlibi}) {
    const auto config = tiny_config(p);
    const auto weights = AttentionWeights::Random(config, rng);
    const Tensor h = random_tensor(7, 8, rng);
    const auto core = attention_forward_with_probs(config, h, weights);
    ASSERT_EQ(core.probs.size(), 2u);
    for (const auto& probs : core.probs) {
      for (std::size_t i = 0; i < 7; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 7; ++j) {
          if (j > i) EXPECT_EQ(probs(i, j), 0.0);
          sum += probs(i, j);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
    // Changing the last row leaves every earlier output untouched.
    Tensor h2 = h;
    for (std::size_t c = 0; c < 8; ++c) h2(6, c) += 1.0;
    const Tensor a = attention_forward(config, h, weights);
    const Tensor b = attention_forward(config, h2, weights);
    for (std::size_t r = 0; r < 6; ++r) {
      for (std::size_t c = 0; c < 8; ++c) EXPECT_EQ(a(r, c), b(r, c));
    }
  }
}

TEST(TinyLm, LearnedPositionsRefuseLongerSequences) {
  const TinyLm model(tiny_config(Positional::kLearned), 3);
  const std::vector<std::int64_t> ok(8, 1);
  EXPECT_NO_THROW(model.logits(ok));
  const std::vector<std::int64_t> too_long(9, 1);
  EXPECT_THROW(model.logits(too_long), ExtrapolationUnsupportedError);
  for (const auto p : {Positional::kNone, Positional::kRotary, Positional::kAlibi}) {
    const TinyLm other(tiny_config(p), 3);
    const Tensor logits = other.logits(std::vector<std::int64_t>(32, 2));
    EXPECT_EQ(logits.rows(), 32u);
    EXPECT_TRUE(logits.all_finite());
  }
}

TEST(TinyLm, DeterministicAndCausal) {
  for (const auto p : {Positional::kNone, Positional::kLearned, Positional::kRotary,
                       Positional::kAlibi}) {
    auto config = tiny_config(p);
    config.activation = Activation::kSwiGlu;
    config.embed_norm = true;
    const TinyLm a(config, 5), b(config, 5);
    std::vector<std::int64_t> tokens{1, 4, 2, 8, 5, 7};
    const Tensor la = a.logits(tokens);
    EXPECT_EQ(la, b.logits(tokens));
    tokens.back() = 0;
    const Tensor lb = a.logits(tokens);
    for (std::size_t r = 0; r + 1 < tokens.size(); ++r) {
      for (std::size_t c = 0; c < la.cols(); ++c) EXPECT_EQ(la(r, c), lb(r, c));
    }
  }
}

TEST(Adam, ReducesLossOnFixedBatch) {
  const auto config = tiny_config(Positional::kAlibi);
  TinyLm model(config, 9);
  const std::vector<std::int64_t> tokens{1, 2, 3, 4, 1, 2, 3};
  const std::vector<std::int64_t> targets{2, 3, 4, 1, 2, 3, 4};
  const double before = model.loss(tokens, targets);
  Adam adam(model.parameters(), AdamOptions{});
  for (int step = 0; step < 40; ++step) {
    Tape tape;
    const auto params = model.bind(tape);
    const Var logits = model.forward(tape, params, tokens);
    const Var loss = tape.cross_entropy(logits, targets);
    tape.backward(loss);
    std::vector<Tensor> grads;
    for (const auto& p : params) grads.push_back(p.grad());
    adam.step(model.parameters(), grads);
  }
  EXPECT_EQ(adam.steps(), 40);
  EXPECT_LT(model.loss(tokens, targets), 0.5 * before);
}

TEST(GradCheck, EveryOpPassesAtDefaultPoint) {
  for (const auto& op : grad_check_ops()) {
    const auto report = evaluate_grad_check(op, default_grad_point(op), 1e-4);
    EXPECT_TRUE(report.passed()) << op << " max " << report.max_relative_error;
    EXPECT_GT(report.coordinates, 0u);
  }
}

TEST(GradCheck, SeededPointsAlsoPass) {
  for (const auto& op : {"linear", "layer_norm", "attention_alibi", "tiny_lm_rotary"}) {
    for (std::uint64_t seed : {2u, 3u}) {
      EXPECT_NO_THROW(grad_check(op, default_grad_point(op, seed), 1e-4)) << op;
    }
  }
}

TEST(GradCheck, LinearIsTight) {
  const auto report = evaluate_grad_check("linear", default_grad_point("linear"), 1e-4);
  EXPECT_LT(report.max_relative_error, 1e-9);
}

TEST(GradCheck, ReportsOffendersOnImpossibleTolerance) {
  const auto report = evaluate_grad_check("gelu", default_grad_point("gelu"), 0.0);
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.offenders.front().coordinate.rfind("input0[", 0), 0u);
  EXPECT_THROW(grad_check("gelu", default_grad_point("gelu"), 0.0), CheckFailure);
  EXPECT_THROW(default_grad_point("nope"), ConfigError);
}

TEST(KernelChecks, AllPass) {
  const auto report = run_kernel_checks();
  EXPECT_TRUE(report.passed()) << report.to_text();
  EXPECT_GE(report.results.size(), grad_check_ops().size() + 6);
}

TEST(Extrapolation, CopyTaskIsPeriodic) {
  std::mt19937_64 rng(1);
  const CopyTask task;
  const auto s = task.sample(40, 16, rng);
  ASSERT_EQ(s.inputs.size(), 40u);
  for (std::size_t i = 8; i < 40; ++i) EXPECT_EQ(s.inputs[i], s.inputs[i - 8]);
  for (std::size_t i = 0; i + 1 < 40; ++i) EXPECT_EQ(s.targets[i], s.inputs[i + 1]);
  EXPECT_THROW(task.sample(8, 4, rng), ConfigError);
}

TEST(Extrapolation, ShortRunCsv) {
  KernelConfig config;
  config.n_ctx_train = 16;
  ExtrapolationOptions options;
  options.train_len = 16;
  options.eval_lens = {16, 32};
  options.steps = 5;
  options.batch = 2;
  options.eval_sequences = 2;

  config.positional = Positional::kLearned;
  const auto learned = extrapolation_curve(config, options);
  ASSERT_EQ(learned.rows.size(), 2u);
  EXPECT_TRUE(learned.rows[0].loss.has_value());
  EXPECT_FALSE(learned.rows[1].loss.has_value());
  EXPECT_EQ(learned.rows[1].status, kStatusUnsupported);

  config.positional = Positional::kAlibi;
  const auto alibi = extrapolation_curve(config, options);
  ASSERT_EQ(alibi.rows.size(), 2u);
  EXPECT_TRUE(alibi.rows[1].loss.has_value());
  EXPECT_EQ(alibi.rows[1].status, kStatusOk);

  auto rows = alibi.rows;
  rows.insert(rows.end(), learned.rows.begin(), learned.rows.end());
  const std::string csv = extrapolation_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "positional,eval_len,loss");
  EXPECT_NE(csv.find("learned,32,extrapolation-unsupported"), std::string::npos);

  options.train_len = 32;
  EXPECT_THROW(extrapolation_curve(config, options), ConfigError);
}

}  // namespace
}  // namespace budgetlab::kernel
