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

#include "budgetlab/kernel/ffn.h"

#include <cmath>

#include "budgetlab/error.h"
#include "budgetlab/kernel/functions.h"

namespace budgetlab::kernel {

std::int64_t swiglu_hidden_size(std::int64_t d_model, std::int64_t multiple) {
  if (d_model <= 0 || multiple <= 0) throw DomainError("swiglu_hidden_size needs positive sizes");
  // (2/3) * 4d = 8d/3; the nearest multiple of m is round(8d / 3m) * m, done in
  // integers so that exact halves resolve the same way everywhere.
  const std::int64_t num = 8 * d_model;
  const std::int64_t den = 3 * multiple;
  return (2 * num + den) / (2 * den) * multiple;
}

Tensor swiglu_ffn(const Tensor& x, const Tensor& w, const Tensor& v, const Tensor& w2) {
  if (w.rows() != x.cols() || !w.same_shape(v) || w2.rows() != w.cols() ||
      w2.cols() != x.cols()) {
    throw ConfigError("swiglu_ffn: W, V must be d_model x d_ff and W2 d_ff x d_model");
  }
  Tensor gate = matmul(x, w);
  const Tensor value = matmul(x, v);
  for (std::size_t i = 0; i < gate.size(); ++i) gate[i] = swish(gate[i]) * value[i];
  return matmul(gate, w2);
}

Tensor gelu_ffn(const Tensor& x, const Tensor& w1, const Tensor& b1, const Tensor& w2,
                const Tensor& b2) {
  if (w1.rows() != x.cols() || b1.size() != w1.cols() || w2.rows() != w1.cols() ||
      w2.cols() != x.cols() || b2.size() != x.cols()) {
    throw ConfigError("gelu_ffn: inconsistent weight shapes");
  }
  Tensor hidden = matmul(x, w1);
  for (std::size_t r = 0; r < hidden.rows(); ++r) {
    for (std::size_t c = 0; c < hidden.cols(); ++c) hidden(r, c) = gelu(hidden(r, c) + b1[c]);
  }
  Tensor out = matmul(hidden, w2);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += b2[c];
  }
  return out;
}

}  // namespace budgetlab::kernel
