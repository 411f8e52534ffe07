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

#include "budgetlab/kernel/extrapolation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/kernel/model.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::kernel {

CopyTask::Sample CopyTask::sample(std::int64_t length, std::int64_t vocab,
                                  std::mt19937_64& rng) const {
  if (period < 1 || period > vocab) throw ConfigError("copy task period must be in [1, vocab]");
  if (length < 1) throw ConfigError("copy task length must be positive");
  std::vector<std::int64_t> block(static_cast<std::size_t>(vocab));
  std::iota(block.begin(), block.end(), 0);
  std::shuffle(block.begin(), block.end(), rng);
  block.resize(static_cast<std::size_t>(period));

  Sample s;
  s.inputs.resize(static_cast<std::size_t>(length));
  s.targets.resize(static_cast<std::size_t>(length));
  const auto p = static_cast<std::size_t>(period);
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    s.inputs[i] = block[i % p];
    s.targets[i] = block[(i + 1) % p];
  }
  return s;
}

ExtrapolationResult extrapolation_curve(const KernelConfig& config,
                                        const ExtrapolationOptions& options) {
  config.validate();
  if (config.n_layer > 2 || config.d_model > 64) {
    throw ConfigError("extrapolation runs are limited to <= 2 layers and d_model <= 64");
  }
  if (options.train_len > config.n_ctx_train) {
    throw ConfigError("train_len exceeds the configured training context");
  }
  if (options.steps < 1 || options.batch < 1 || options.eval_sequences < 1) {
    throw ConfigError("steps, batch and eval_sequences must be positive");
  }
  const auto start = std::chrono::steady_clock::now();

  TinyLm model(config, options.seed);
  Adam adam(model.parameters(), AdamOptions{.learning_rate = options.learning_rate});
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);

  ExtrapolationResult result;
  const auto warmup = std::max<std::int64_t>(1, options.steps / 10);
  for (std::int64_t step = 0; step < options.steps; ++step) {
    Tape tape;
    const auto vars = model.bind(tape);
    Var total;
    for (std::int64_t b = 0; b < options.batch; ++b) {
      const auto s = options.task.sample(options.train_len, config.vocab, rng);
      Var loss = tape.cross_entropy(model.forward(tape, vars, s.inputs), s.targets);
      total = b == 0 ? loss : tape.sum(total, loss);
    }
    total = tape.scale(total, 1.0 / static_cast<double>(options.batch));
    result.final_train_loss = total.value()[0];
    if (!std::isfinite(result.final_train_loss)) {
      for (std::int64_t len : options.eval_lens) {
        result.rows.push_back({config.positional, len, std::nullopt, kStatusDiverged});
      }
      return result;
    }
    tape.backward(total);
    std::vector<Tensor> grads;
    grads.reserve(vars.size());
    for (const Var& v : vars) grads.push_back(v.grad());
    // Linear warmup then cosine decay to 10% of the peak rate.
    double lr_scale = 1.0;
    if (step < warmup) {
      lr_scale = static_cast<double>(step + 1) / static_cast<double>(warmup);
    } else {
      const double progress = static_cast<double>(step - warmup) /
                              static_cast<double>(std::max<std::int64_t>(1, options.steps - warmup));
      lr_scale = 0.1 + 0.45 * (1.0 + std::cos(progress * 3.14159265358979323846));
    }
    adam.step(model.parameters(), grads, lr_scale);
  }

  for (std::int64_t len : options.eval_lens) {
    ExtrapolationRow row{config.positional, len, std::nullopt, kStatusOk};
    // Evaluation data depends only on the seed and length, so every
    // positional strategy sees the same sequences.
    std::mt19937_64 eval_rng(options.seed * 1000003ULL + static_cast<std::uint64_t>(len));
    try {
      double sum = 0.0;
      for (std::int64_t i = 0; i < options.eval_sequences; ++i) {
        const auto s = options.task.sample(len, config.vocab, eval_rng);
        sum += model.loss(s.inputs, s.targets);
      }
      row.loss = sum / static_cast<double>(options.eval_sequences);
      if (!std::isfinite(*row.loss)) {
        row.loss.reset();
        row.status = kStatusDiverged;
      }
    } catch (const ExtrapolationUnsupportedError&) {
      row.status = kStatusUnsupported;
    }
    result.rows.push_back(row);
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string extrapolation_csv(const std::vector<ExtrapolationRow>& rows) {
  std::string out = "positional,eval_len,loss\n";
  for (const ExtrapolationRow& r : rows) {
    out += fmt::format("{},{},{}\n", to_string(r.positional), r.eval_len,
                       r.loss ? report::format_exact(*r.loss) : r.status);
  }
  return out;
}

}  // namespace budgetlab::kernel
