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

#ifndef BUDGETLAB_SHAPE_SEARCH_H_
#define BUDGETLAB_SHAPE_SEARCH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "budgetlab/model_shape.h"
#include "budgetlab/shape/memory.h"

namespace budgetlab::shape {

// Exact parameter count: embeddings (doubled when untied), per-layer
// attention with biases, the feed-forward block (two matrices for GELU, three
// for SwiGLU), two layer norms per layer and the final layer norm.
std::int64_t param_count(const ModelShape& shape);

// Width/depth rule depth = slope * ln(N) + b, with b chosen so the anchor maps
// to itself. The defaults put 175B parameters at 80 layers.
struct DepthRule {
  double anchor_params = 175e9;
  double anchor_depth = 80.0;
  double slope = 5.037;
};

std::int64_t depth_recommendation(double n_params, const DepthRule& rule = {});

struct SearchConstraints {
  double min_params = 160e9;
  double max_params = 200e9;
  std::int64_t min_layers = 70;
  std::int64_t max_layers = 80;
  std::vector<std::int64_t> head_dims = DefaultHeadDims();
  std::int64_t hidden_alignment = 128;
  std::int64_t vocab = kDefaultVocab;
  std::int64_t n_ctx = kDefaultContext;
  Activation activation = Activation::kGelu;

  // 96, 104, ..., 224.
  static std::vector<std::int64_t> DefaultHeadDims();
};

// Every (layers, hidden, heads) with layers in range, hidden a multiple of the
// alignment, hidden = heads * head_dim for a listed head_dim and a parameter
// count inside the range. Ordered by layers, then hidden, then heads.
std::vector<ModelShape> enumerate_candidates(const SearchConstraints& constraints);

struct QuantizationFlags {
  bool warp_aligned = false;
  bool sm_aligned = false;
};

// A100 defaults: 32-thread warps, 108 streaming multiprocessors.
QuantizationFlags quantization_flags(std::int64_t dim, std::int64_t warp_size = 32,
                                     std::int64_t n_sm = 108);

struct CandidateRow {
  std::string label;
  ModelShape shape;
  ParallelismPlan plan;
  MemoryEstimate memory;
  std::optional<double> step_time;  // seconds per iteration, measured
  std::optional<double> tflops;     // per GPU, measured
  std::optional<double> published_size_b;
  std::optional<double> measured_memory_gb;
  bool measured_oom = false;
};

struct SelectionRules {
  std::int64_t max_head_dim = 200;
};

// Drops rows whose head_dim exceeds the limit, then takes the highest
// measured throughput; ties go to the shallower model. Rows without a
// throughput measurement never win. Throws NoCandidateError when nothing is
// left.
CandidateRow select_final(std::span<const CandidateRow> rows, const SelectionRules& rules = {});

struct ConsistencyOptions {
  std::int64_t batch_sequences = 2'048;
  double product_tolerance = 0.02;
  double flop_tolerance = 0.05;
};

struct ConsistencyViolation {
  std::string label;
  std::string message;
};

struct ConsistencyReport {
  int rows_checked = 0;
  int groups_checked = 0;
  std::vector<ConsistencyViolation> violations;

  bool passed() const { return violations.empty(); }
};

// Within each group of identical shapes, step_time * tflops must agree to
// product_tolerance (relative to the group minimum); each row's tflops must
// match the hardware-FLOP estimate at batch_sequences to flop_tolerance.
// Rows lacking either measurement are skipped.
ConsistencyReport consistency_check(std::span<const CandidateRow> rows,
                                    const ConsistencyOptions& options = {});

// Benchmark tables with columns
// size_bparams,layers,hidden,heads,head_dim,dp,tp,pp,mbs,mem_gb[,oom],step_time,tflops
// (plus an optional leading `config` label). Memory estimates use `model`.
std::vector<CandidateRow> load_benchmark_csv(const std::filesystem::path& path,
                                             const MemoryModel& model = {});

// size_bparams,layers,hidden,heads,head_dim,dp,tp,pp,mbs,mem_gb,oom
std::string candidates_csv(std::span<const CandidateRow> rows);

}  // namespace budgetlab::shape

#endif  // BUDGETLAB_SHAPE_SEARCH_H_
