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

#ifndef BUDGETLAB_KERNEL_MODEL_H_
#define BUDGETLAB_KERNEL_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "budgetlab/kernel/autodiff.h"
#include "budgetlab/kernel/config.h"
#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

// Small pre-norm decoder: token embedding (plus learned positions when
// configured), optional embedding layer norm, n_layer blocks of causal
// attention and feed-forward, a final layer norm and an output head tied to
// the token embedding.
class TinyLm {
 public:
  TinyLm(KernelConfig config, std::uint64_t seed);

  const KernelConfig& config() const { return config_; }
  std::vector<Tensor>& parameters() { return params_; }
  const std::vector<Tensor>& parameters() const { return params_; }
  const std::vector<std::string>& parameter_names() const { return names_; }
  std::size_t parameter_count() const;

  // Pushes every parameter onto the tape as a leaf, in parameters() order.
  std::vector<Var> bind(Tape& tape) const;

  // Records the forward pass and returns seq x vocab logits. Throws
  // ExtrapolationUnsupportedError when learned positions would be indexed
  // past n_ctx_train.
  Var forward(Tape& tape, std::span<const Var> params,
              std::span<const std::int64_t> tokens) const;

  Tensor logits(std::span<const std::int64_t> tokens) const;

  // Mean next-token loss; an empty weight span weights every position once.
  double loss(std::span<const std::int64_t> tokens, std::span<const std::int64_t> targets,
              std::span<const double> weights = {}) const;

 private:
  std::size_t add_param(std::string name, Tensor value);

  KernelConfig config_;
  std::vector<Tensor> params_;
  std::vector<std::string> names_;
};

struct AdamOptions {
  double learning_rate = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.95;
  double epsilon = 1e-8;
  double grad_clip = 1.0;  // global L2 norm; <= 0 disables clipping
};

class Adam {
 public:
  Adam(const std::vector<Tensor>& params, AdamOptions options);

  // Applies one update in place; `grads` must line up with `params`.
  void step(std::vector<Tensor>& params, const std::vector<Tensor>& grads,
            double lr_scale = 1.0);
  std::int64_t steps() const { return t_; }

 private:
  AdamOptions options_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::int64_t t_ = 0;
};

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_MODEL_H_
