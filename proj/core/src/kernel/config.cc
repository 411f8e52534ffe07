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

#include "budgetlab/kernel/config.h"

#include <string>

#include "budgetlab/error.h"

namespace budgetlab::kernel {

std::string_view to_string(Positional positional) {
  switch (positional) {
    case Positional::kNone:
      return "none";
    case Positional::kLearned:
      return "learned";
    case Positional::kRotary:
      return "rotary";
    case Positional::kAlibi:
      return "alibi";
  }
  return "unknown";
}

Positional parse_positional(std::string_view text) {
  if (text == "none") return Positional::kNone;
  if (text == "learned") return Positional::kLearned;
  if (text == "rotary") return Positional::kRotary;
  if (text == "alibi") return Positional::kAlibi;
  throw ConfigError("unknown positional strategy '" + std::string(text) + "'");
}

void KernelConfig::validate() const {
  if (n_layer < 0 || d_model <= 0 || n_heads <= 0 || head_dim <= 0 || d_ff <= 0 ||
      n_ctx_train <= 0 || vocab <= 0) {
    throw ConfigError("kernel config dimensions must be positive");
  }
  if (n_heads * head_dim != d_model) {
    throw ConfigError("kernel config requires n_heads * head_dim == d_model");
  }
  if (positional == Positional::kRotary && head_dim % 2 != 0) {
    throw ConfigError("rotary embeddings need an even head_dim");
  }
  if (!(rotary_base > 0.0)) throw ConfigError("rotary_base must be positive");
}

}  // namespace budgetlab::kernel
