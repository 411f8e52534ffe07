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

#ifndef BUDGETLAB_KERNEL_ATTENTION_H_
#define BUDGETLAB_KERNEL_ATTENTION_H_

#include <cstdint>
#include <random>
#include <vector>

#include "budgetlab/kernel/config.h"
#include "budgetlab/kernel/functions.h"
#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

// Projection weights (d_model x d_model) and biases (1 x d_model).
struct AttentionWeights {
  Tensor wq, wk, wv, wo;
  Tensor bq, bk, bv, bo;

  static AttentionWeights Random(const KernelConfig& config, std::mt19937_64& rng,
                                 double scale = 0.2);
};

// Causal multi-head attention over q, k, v (seq x n_heads*head_dim).
// slopes, when given, adds the ALiBi bias to the logits.
struct AttentionCore {
  Tensor output;
  std::vector<Tensor> probs;  // per head, seq x seq, zero above the diagonal
};

AttentionCore causal_attention_core(const Tensor& q, const Tensor& k, const Tensor& v,
                                    std::int64_t n_heads, std::int64_t head_dim,
                                    const AlibiSlopes* slopes);

// Full attention sub-layer: projections, the configured positional strategy
// (rotary on q/k, ALiBi bias on the logits, nothing for None/Learned) and the
// output projection. Learned positions live in the embedding, so here they
// only bound the sequence length: seq > n_ctx_train throws
// ExtrapolationUnsupportedError.
Tensor attention_forward(const KernelConfig& config, const Tensor& hidden_states,
                         const AttentionWeights& weights);

// Same, also returning the attention probabilities.
AttentionCore attention_forward_with_probs(const KernelConfig& config,
                                           const Tensor& hidden_states,
                                           const AttentionWeights& weights);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_ATTENTION_H_
