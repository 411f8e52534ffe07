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

#include "budgetlab/shape/memory.h"

#include "budgetlab/error.h"
#include "budgetlab/shape/search.h"

namespace budgetlab::shape {

void ParallelismPlan::validate() const {
  if (dp < 1 || tp < 1 || pp < 1 || micro_batch < 1) {
    throw ConfigError("parallelism degrees and micro-batch must be >= 1");
  }
}

MemoryEstimate memory_per_gpu(const ModelShape& shape, const ParallelismPlan& plan,
                              const MemoryModel& model) {
  shape.validate();
  plan.validate();
  constexpr double kBytesPerGb = 1e9;
  const auto tp = static_cast<double>(plan.tp);
  const auto pp = static_cast<double>(plan.pp);

  MemoryEstimate m;
  m.weights_and_states =
      model.bytes_per_param * static_cast<double>(param_count(shape)) / (tp * pp) / kBytesPerGb;

  std::int64_t slots = shape.n_layer;
  if (model.embedding_slot && plan.pp > 1) ++slots;
  const auto layers_on_stage = static_cast<double>((slots + plan.pp - 1) / plan.pp);
  const double inflight = model.pipeline_inflight.value_or(pp);
  m.activations = model.activation_bytes * static_cast<double>(plan.micro_batch) *
                  static_cast<double>(shape.n_ctx) * static_cast<double>(shape.d_model) *
                  layers_on_stage * inflight / tp / kBytesPerGb;

  m.overhead = model.overhead_gb;
  m.total = m.weights_and_states + m.activations + m.overhead;
  m.oom = m.total > model.capacity_gb;
  return m;
}

}  // namespace budgetlab::shape
