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

#ifndef BUDGETLAB_KERNEL_EMBEDDING_H_
#define BUDGETLAB_KERNEL_EMBEDDING_H_

#include <cstdint>
#include <span>

#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

struct EmbeddingNorm {
  Tensor gain;  // 1 x d_model
  Tensor bias;  // 1 x d_model
};

// Looks up rows of `table` (vocab x d_model). With a norm, each looked-up row
// is layer-normalized and then scaled/shifted. Throws ValidationError for a
// token id outside [0, vocab).
Tensor embedding_forward(std::span<const std::int64_t> tokens, const Tensor& table,
                         const EmbeddingNorm* norm = nullptr);

// Output head tied to the input embedding: hidden * table^T.
Tensor tied_logits(const Tensor& hidden, const Tensor& table);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_EMBEDDING_H_
