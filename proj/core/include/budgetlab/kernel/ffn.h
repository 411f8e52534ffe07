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

#ifndef BUDGETLAB_KERNEL_FFN_H_
#define BUDGETLAB_KERNEL_FFN_H_

#include <cstdint>

#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

// Hidden size that keeps a three-matrix gated block at the parameter count of
// a two-matrix block of width 4 d: the multiple of `multiple` nearest to
// (2/3) * 4 * d_model. 2,048 maps to 5,456.
std::int64_t swiglu_hidden_size(std::int64_t d_model, std::int64_t multiple = 16);

// (swish(x W) * (x V)) W2. W and V are d_model x d_ff, W2 is d_ff x d_model.
Tensor swiglu_ffn(const Tensor& x, const Tensor& w, const Tensor& v, const Tensor& w2);

// gelu(x W1 + b1) W2 + b2.
Tensor gelu_ffn(const Tensor& x, const Tensor& w1, const Tensor& b1, const Tensor& w2,
                const Tensor& b2);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_FFN_H_
