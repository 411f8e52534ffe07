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

#include <benchmark/benchmark.h>

#include <random>

#include "budgetlab/kernel/attention.h"
#include "budgetlab/kernel/grad_check.h"
#include "budgetlab/kernel/tensor.h"
#include "budgetlab/sampling/multilingual.h"
#include "budgetlab/shape/search.h"

namespace {

using namespace budgetlab;

kernel::Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  kernel::Tensor t(rows, cols);
  for (auto& v : t.data()) v = n(rng);
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const auto a = random_tensor(n, n, rng);
  const auto b = random_tensor(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}
BENCHMARK(BM_Matmul)->Arg(32)->Arg(64)->Arg(128);

void BM_AttentionForward(benchmark::State& state) {
  kernel::KernelConfig config;
  config.positional = static_cast<kernel::Positional>(state.range(1));
  std::mt19937_64 rng(2);
  const auto weights = kernel::AttentionWeights::Random(config, rng);
  const auto hidden =
      random_tensor(static_cast<std::size_t>(state.range(0)), config.d_model, rng);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::attention_forward(config, hidden, weights));
}
BENCHMARK(BM_AttentionForward)
    ->ArgsProduct({{64, 256}, {static_cast<int>(kernel::Positional::kRotary),
                               static_cast<int>(kernel::Positional::kAlibi)}});

void BM_GradCheckTinyLm(benchmark::State& state) {
  const auto point = kernel::default_grad_point("tiny_lm_alibi");
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel::evaluate_grad_check("tiny_lm_alibi", point, 1e-4));
  }
}
BENCHMARK(BM_GradCheckTinyLm)->Unit(benchmark::kMillisecond);

void BM_ParamCount(benchmark::State& state) {
  const auto shape = ModelShape::Standard(70, 14'336, 112);
  for (auto _ : state) benchmark::DoNotOptimize(shape::param_count(shape));
}
BENCHMARK(BM_ParamCount);

void BM_EnumerateCandidates(benchmark::State& state) {
  const shape::SearchConstraints constraints;
  for (auto _ : state) benchmark::DoNotOptimize(shape::enumerate_candidates(constraints));
}
BENCHMARK(BM_EnumerateCandidates)->Unit(benchmark::kMicrosecond);

void BM_SamplingProbs(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> size(0.0, 2.0);
  std::vector<sampling::LanguageWeight> weights;
  for (int i = 0; i < state.range(0); ++i) weights.push_back({"l" + std::to_string(i), size(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(sampling::sampling_probs(weights, 0.3));
}
BENCHMARK(BM_SamplingProbs)->Arg(46)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
