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

#ifndef BUDGETLAB_MODEL_SHAPE_H_
#define BUDGETLAB_MODEL_SHAPE_H_

#include <cstdint>
#include <string_view>

namespace budgetlab {

enum class Activation { kGelu, kSwiGlu };

std::string_view to_string(Activation activation);
Activation parse_activation(std::string_view text);

inline constexpr std::int64_t kDefaultVocab = 250'880;
inline constexpr std::int64_t kDefaultContext = 2'048;

// Architectural hyperparameters of a decoder-only transformer.
struct ModelShape {
  std::int64_t n_layer = 0;
  std::int64_t d_model = 0;
  std::int64_t n_heads = 0;
  std::int64_t head_dim = 0;
  std::int64_t d_ff = 0;
  std::int64_t n_ctx = kDefaultContext;
  std::int64_t vocab = kDefaultVocab;
  bool tied_embeddings = true;
  Activation activation = Activation::kGelu;

  // Shape with d_ff = 4 * d_model and a GELU feed-forward block.
  static ModelShape Standard(std::int64_t n_layer, std::int64_t d_model,
                             std::int64_t n_heads,
                             std::int64_t vocab = kDefaultVocab,
                             std::int64_t n_ctx = kDefaultContext);

  // Throws ConfigError unless n_heads * head_dim == d_model and the sizes are
  // positive. n_layer may be zero.
  void validate() const;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;
};

}  // namespace budgetlab

#endif  // BUDGETLAB_MODEL_SHAPE_H_
