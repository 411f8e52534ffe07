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

#include "budgetlab/model_shape.h"

#include <string>

#include "budgetlab/error.h"

namespace budgetlab {

std::string_view to_string(Activation activation) {
  switch (activation) {
    case Activation::kGelu:
      return "gelu";
    case Activation::kSwiGlu:
      return "swiglu";
  }
  return "unknown";
}

Activation parse_activation(std::string_view text) {
  if (text == "gelu" || text == "GELU") return Activation::kGelu;
  if (text == "swiglu" || text == "SwiGLU") return Activation::kSwiGlu;
  throw ConfigError("unknown activation '" + std::string(text) + "'");
}

ModelShape ModelShape::Standard(std::int64_t n_layer, std::int64_t d_model,
                                std::int64_t n_heads, std::int64_t vocab,
                                std::int64_t n_ctx) {
  ModelShape shape;
  shape.n_layer = n_layer;
  shape.d_model = d_model;
  shape.n_heads = n_heads;
  shape.head_dim = n_heads > 0 ? d_model / n_heads : 0;
  shape.d_ff = 4 * d_model;
  shape.n_ctx = n_ctx;
  shape.vocab = vocab;
  return shape;
}

void ModelShape::validate() const {
  if (n_layer < 0 || d_model <= 0 || n_heads <= 0 || head_dim <= 0 || d_ff <= 0 ||
      n_ctx < 0 || vocab <= 0) {
    throw ConfigError("model shape has non-positive dimensions");
  }
  if (n_heads * head_dim != d_model) {
    throw ConfigError("n_heads * head_dim (" + std::to_string(n_heads * head_dim) +
                      ") != d_model (" + std::to_string(d_model) + ")");
  }
}

}  // namespace budgetlab
