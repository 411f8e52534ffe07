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

#include "budgetlab/kernel/checks.h"

#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/kernel/attention.h"
#include "budgetlab/kernel/functions.h"
#include "budgetlab/kernel/grad_check.h"

namespace budgetlab::kernel {
namespace {

constexpr Positional kAllPositional[] = {Positional::kNone, Positional::kLearned,
                                         Positional::kRotary, Positional::kAlibi};

Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Tensor t(rows, cols);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

CheckResult causality(Positional positional, std::mt19937_64& rng) {
  KernelConfig config;
  config.positional = positional;
  const auto weights = AttentionWeights::Random(config, rng);
  const std::size_t seq = 12;
  const Tensor base = random_tensor(seq, static_cast<std::size_t>(config.d_model), rng);
  const Tensor ref = attention_forward(config, base, weights);
  std::size_t violations = 0;
  for (std::size_t t = 0; t + 1 < seq; ++t) {
    Tensor perturbed = base;
    for (double& v : perturbed.row(t + 1)) v += 1.0;
    const Tensor out = attention_forward(config, perturbed, weights);
    for (std::size_t r = 0; r <= t; ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) {
        if (out(r, c) != ref(r, c)) ++violations;
      }
    }
  }
  return {fmt::format("causality/{}", to_string(positional)), violations == 0,
          fmt::format("{} changed entries at or before the perturbed position", violations)};
}

CheckResult rotary_shift(std::mt19937_64& rng) {
  const std::int64_t hd = 8;
  std::uniform_int_distribution<std::int64_t> pos_dist(0, 500);
  const std::int64_t deltas[] = {1, 7, 100};
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const Tensor q = random_tensor(1, hd, rng);
    const Tensor k = random_tensor(1, hd, rng);
    const std::int64_t i = pos_dist(rng);
    const std::int64_t j = pos_dist(rng);
    const std::int64_t delta = deltas[s % 3];
    auto dot = [&](std::int64_t pi, std::int64_t pj) {
      const std::int64_t a[] = {pi};
      const std::int64_t b[] = {pj};
      const Tensor rq = rotary_apply(q, a);
      const Tensor rk = rotary_apply(k, b);
      double acc = 0.0;
      for (std::size_t c = 0; c < rq.size(); ++c) acc += rq[c] * rk[c];
      return acc;
    };
    worst = std::max(worst, std::abs(dot(i, j) - dot(i + delta, j + delta)));
  }
  return {"rotary/shift-invariance", worst <= 1e-6,
          fmt::format("max |<q_i,k_j> - <q_i+d,k_j+d>| = {:.3g} over 1000 samples", worst)};
}

CheckResult alibi_structure() {
  std::string problem;
  for (std::int64_t n : {1, 2, 4, 8, 16}) {
    const AlibiSlopes slopes = alibi_slopes(n);
    for (std::size_t h = 0; h < slopes.slopes.size(); ++h) {
      const double m = slopes.slopes[h];
      if (!(m > 0.0 && m <= 1.0)) problem = fmt::format("slope {} of {} outside (0,1]", h, n);
      if (h > 0 && !(m < slopes.slopes[h - 1])) {
        problem = fmt::format("slopes for {} heads not strictly decreasing", n);
      }
    }
    const std::size_t len = 16;
    const auto bias = alibi_bias(slopes, len, len);
    for (std::size_t h = 0; h < bias.size(); ++h) {
      for (std::size_t i = 0; i < len; ++i) {
        if (bias[h](i, i) != 0.0) problem = "non-zero diagonal";
        for (std::size_t j = 1; j <= i; ++j) {
          if (!(bias[h](i, j - 1) < bias[h](i, j))) problem = "bias not decreasing in distance";
        }
        for (std::size_t j = i + 1; j < len; ++j) {
          if (!(std::isinf(bias[h](i, j)) && bias[h](i, j) < 0)) problem = "future not masked";
        }
      }
    }
  }
  return {"alibi/bias-structure", problem.empty(), problem.empty() ? "ok" : problem};
}

CheckResult softmax_normalization(std::mt19937_64& rng) {
  double worst = 0.0;
  for (Positional positional : kAllPositional) {
    KernelConfig config;
    config.positional = positional;
    const auto weights = AttentionWeights::Random(config, rng, 0.5);
    const Tensor x = random_tensor(20, static_cast<std::size_t>(config.d_model), rng);
    const AttentionCore core = attention_forward_with_probs(config, x, weights);
    for (const Tensor& p : core.probs) {
      for (std::size_t r = 0; r < p.rows(); ++r) {
        double sum = 0.0;
        for (double v : p.row(r)) sum += v;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
  }
  return {"softmax/row-sums", worst <= 1e-6, fmt::format("max |row sum - 1| = {:.3g}", worst)};
}

CheckResult long_context(std::mt19937_64& rng) {
  std::string detail;
  bool ok = true;
  for (Positional positional : {Positional::kNone, Positional::kRotary, Positional::kAlibi}) {
    KernelConfig config;
    config.positional = positional;
    const auto weights = AttentionWeights::Random(config, rng);
    const Tensor x = random_tensor(static_cast<std::size_t>(4 * config.n_ctx_train),
                                   static_cast<std::size_t>(config.d_model), rng);
    const bool finite = attention_forward(config, x, weights).all_finite();
    ok = ok && finite;
    detail += fmt::format("{}={} ", to_string(positional), finite ? "finite" : "NON-FINITE");
  }
  KernelConfig learned;
  learned.positional = Positional::kLearned;
  const auto weights = AttentionWeights::Random(learned, rng);
  try {
    attention_forward(learned,
                      random_tensor(static_cast<std::size_t>(learned.n_ctx_train + 1),
                                    static_cast<std::size_t>(learned.d_model), rng),
                      weights);
    ok = false;
    detail += "learned=accepted-overlong";
  } catch (const ExtrapolationUnsupportedError&) {
    detail += "learned=rejected";
  }
  return {"forward/4x-context", ok, detail};
}

}  // namespace

bool KernelCheckReport::passed() const {
  for (const CheckResult& r : results) {
    if (!r.passed) return false;
  }
  return !results.empty();
}

std::string KernelCheckReport::to_text() const {
  std::string out;
  for (const CheckResult& r : results) {
    out += fmt::format("{} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.detail);
  }
  out += fmt::format("{} ({} checks, {:.2f} s)\n", passed() ? "ALL PASSED" : "FAILED",
                     results.size(), seconds);
  return out;
}

KernelCheckReport run_kernel_checks(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  KernelCheckReport report;
  for (Positional positional : kAllPositional) report.results.push_back(causality(positional, rng));
  report.results.push_back(rotary_shift(rng));
  report.results.push_back(alibi_structure());
  report.results.push_back(softmax_normalization(rng));
  report.results.push_back(long_context(rng));
  for (const std::string& op : grad_check_ops()) {
    const GradCheckReport g = evaluate_grad_check(op, default_grad_point(op, seed), 1e-4);
    std::string detail = fmt::format("max rel error {:.3g} over {} coordinates",
                                     g.max_relative_error, g.coordinates);
    if (!g.passed()) detail += fmt::format(", first offender {}", g.offenders.front().coordinate);
    report.results.push_back({"grad/" + op, g.passed(), detail});
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace budgetlab::kernel
