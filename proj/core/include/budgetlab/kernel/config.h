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

#ifndef BUDGETLAB_KERNEL_CONFIG_H_
#define BUDGETLAB_KERNEL_CONFIG_H_

#include <cstdint>
#include <string_view>

#include "budgetlab/model_shape.h"

namespace budgetlab::kernel {

enum class Positional { kNone, kLearned, kRotary, kAlibi };

std::string_view to_string(Positional positional);
Positional parse_positional(std::string_view text);

// Configuration of the desk-scale transformer used for mechanism checks.
struct KernelConfig {
  std::int64_t n_layer = 2;
  std::int64_t d_model = 32;
  std::int64_t n_heads = 4;
  std::int64_t head_dim = 8;
  std::int64_t d_ff = 128;
  std::int64_t n_ctx_train = 64;
  std::int64_t vocab = 16;
  Positional positional = Positional::kAlibi;
  Activation activation = Activation::kGelu;
  bool embed_norm = false;
  double rotary_base = 1e4;

  // Throws ConfigError on inconsistent sizes (n_heads * head_dim != d_model,
  // odd head_dim with rotary, non-positive dimensions).
  void validate() const;
};

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_CONFIG_H_
