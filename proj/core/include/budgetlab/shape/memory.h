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

#ifndef BUDGETLAB_SHAPE_MEMORY_H_
#define BUDGETLAB_SHAPE_MEMORY_H_

#include <cstdint>
#include <optional>

#include "budgetlab/model_shape.h"

namespace budgetlab::shape {

// Data x tensor x pipeline layout; micro_batch is sequences per micro-batch.
struct ParallelismPlan {
  std::int64_t dp = 1;
  std::int64_t tp = 1;
  std::int64_t pp = 1;
  std::int64_t micro_batch = 1;

  std::int64_t n_gpus() const { return dp * tp * pp; }
  void validate() const;

  friend bool operator==(const ParallelismPlan&, const ParallelismPlan&) = default;
};

// Per-GPU memory knobs. These are estimation constants, calibrated so that
// 80 GB A100 runs land on the right side of the capacity line; they make no
// claim about where the bytes actually go.
struct MemoryModel {
  // Mixed-precision weights, gradients and Adam moments.
  double bytes_per_param = 16.0;
  // Full recomputation keeps only each layer's input, in half precision.
  double activation_bytes = 2.0;
  // Micro-batches alive on the worst pipeline stage; unset means pp (1F1B).
  std::optional<double> pipeline_inflight = std::nullopt;
  // Context, communication buffers, recomputation workspace, fragmentation.
  double overhead_gb = 9.0;
  double capacity_gb = 80.0;
  // Count the embedding as one extra layer slot when pipelining.
  bool embedding_slot = true;
};

struct MemoryEstimate {
  double weights_and_states = 0.0;  // GB (1e9 bytes)
  double activations = 0.0;
  double overhead = 0.0;
  double total = 0.0;
  bool oom = false;
};

MemoryEstimate memory_per_gpu(const ModelShape& shape, const ParallelismPlan& plan,
                              const MemoryModel& model = {});

}  // namespace budgetlab::shape

#endif  // BUDGETLAB_SHAPE_MEMORY_H_
