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

#ifndef BUDGETLAB_KERNEL_AUTODIFF_H_
#define BUDGETLAB_KERNEL_AUTODIFF_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "budgetlab/kernel/functions.h"
#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// lives.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Tensor& grad() const;
};

// Reverse-mode recorder covering the operations the tiny transformer needs.
// Every op appends a node whose backward closure pushes gradients to its
// inputs; backward() walks the nodes in reverse order once.
class Tape {
 public:
  Var leaf(Tensor value);

  Var matmul(Var a, Var b);
  Var matmul_transposed(Var a, Var b);  // a * b^T
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // broadcast a 1 x cols row over every row of a
  Var mul(Var a, Var b);
  Var scale(Var a, double factor);
  Var gelu(Var a);
  Var swish(Var a);
  Var softmax(Var a);  // row-wise
  Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
  Var embedding(Var table, std::span<const std::int64_t> tokens);
  Var rotary(Var x, std::int64_t n_heads, std::int64_t head_dim,
             std::span<const std::int64_t> positions, double base);
  Var causal_attention(Var q, Var k, Var v, std::int64_t n_heads, std::int64_t head_dim,
                       const AlibiSlopes* slopes);
  // Weighted mean of token-level negative log-likelihoods. An empty weight span
  // means every row counts once. Result is 1 x 1.
  Var cross_entropy(Var logits, std::span<const std::int64_t> targets,
                    std::span<const double> weights = {});
  // sum(a .* weights); used to reduce a tensor output to a scalar for checks.
  Var weighted_sum(Var a, const Tensor& weights);
  Var sum(Var a, Var b);  // scalar + scalar

  // Seeds d(out)/d(out) = 1 for a 1 x 1 output and accumulates gradients.
  void backward(Var out);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  const Tensor& grad(std::size_t id) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&, std::size_t)> backward;
  };

  Var push(Tensor value, std::function<void(Tape&, std::size_t)> backward);
  Tensor& grad_ref(std::size_t id);
  const Tensor& out_grad(std::size_t id) const { return nodes_[id].grad; }

  std::vector<Node> nodes_;
};

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_AUTODIFF_H_
