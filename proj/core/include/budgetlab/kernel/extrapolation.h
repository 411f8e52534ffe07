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

#ifndef BUDGETLAB_KERNEL_EXTRAPOLATION_H_
#define BUDGETLAB_KERNEL_EXTRAPOLATION_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "budgetlab/kernel/config.h"

namespace budgetlab::kernel {

// Sequences made of a random block of `period` distinct tokens repeated to
// the requested length. After the first block every next token is
// determined by the token one period earlier.
struct CopyTask {
  std::int64_t period = 8;

  struct Sample {
    std::vector<std::int64_t> inputs;
    std::vector<std::int64_t> targets;
  };
  Sample sample(std::int64_t length, std::int64_t vocab, std::mt19937_64& rng) const;
};

struct ExtrapolationOptions {
  std::int64_t train_len = 64;
  std::vector<std::int64_t> eval_lens = {64, 128};
  std::int64_t steps = 1000;
  std::int64_t batch = 8;
  std::int64_t eval_sequences = 16;
  double learning_rate = 3e-3;
  std::uint64_t seed = 7;
  CopyTask task;
};

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusUnsupported = "extrapolation-unsupported";
inline constexpr const char* kStatusDiverged = "diverged";

struct ExtrapolationRow {
  Positional positional = Positional::kAlibi;
  std::int64_t eval_len = 0;
  std::optional<double> loss;
  std::string status = kStatusOk;
};

struct ExtrapolationResult {
  std::vector<ExtrapolationRow> rows;
  double final_train_loss = 0.0;
  double seconds = 0.0;
};

// Trains a fresh model at options.train_len and evaluates the mean next-token
// loss at each eval length on held-out sequences. Learned positions beyond
// their table and NaN training losses are recorded as row statuses.
ExtrapolationResult extrapolation_curve(const KernelConfig& config,
                                        const ExtrapolationOptions& options);

// positional,eval_len,loss. Rows without a loss carry their status in the
// loss column.
std::string extrapolation_csv(const std::vector<ExtrapolationRow>& rows);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_EXTRAPOLATION_H_
