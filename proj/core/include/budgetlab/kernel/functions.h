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

#ifndef BUDGETLAB_KERNEL_FUNCTIONS_H_
#define BUDGETLAB_KERNEL_FUNCTIONS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

// Exact erf form, 0.5 x (1 + erf(x / sqrt 2)).
double gelu(double x);
double gelu_derivative(double x);
double sigmoid(double x);
// x * sigmoid(x)
double swish(double x);
double swish_derivative(double x);

// One ALiBi slope per head. For power-of-two head counts m_h = 2^(-8h/n),
// strictly decreasing; other counts interleave the slopes of the neighbouring
// powers of two as in the original ALiBi code.
struct AlibiSlopes {
  std::vector<double> slopes;
};

AlibiSlopes alibi_slopes(std::int64_t n_heads);

// bias[h](i, j) = -m_h * (i - j) for j <= i, -infinity above the diagonal.
// Query i sits at absolute position (k_len - q_len) + i, so a query block
// aligned with the end of the keys is handled too.
std::vector<Tensor> alibi_bias(const AlibiSlopes& slopes, std::size_t q_len, std::size_t k_len);

// Rotates consecutive pairs (x_2i, x_2i+1) of every row by
// positions[row] * base^(-2i / head_dim). vectors is rows x head_dim.
// Throws ConfigError on odd head_dim or a position count mismatch.
Tensor rotary_apply(const Tensor& vectors, std::span<const std::int64_t> positions,
                    double base = 1e4);
// Same rotation for every head block of a rows x (n_heads * head_dim) matrix.
// `inverse` rotates by the negated angles (the transpose).
Tensor rotary_apply_heads(const Tensor& x, std::int64_t n_heads, std::int64_t head_dim,
                          std::span<const std::int64_t> positions, double base,
                          bool inverse = false);

// Row-wise layer normalization with gain and bias (1 x cols).
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

// In-place row softmax. -infinity entries receive probability 0.
void softmax_rows(Tensor& logits);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_FUNCTIONS_H_
