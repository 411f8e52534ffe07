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

#include "budgetlab/kernel/embedding.h"

#include <string>

#include "budgetlab/error.h"
#include "budgetlab/kernel/functions.h"

namespace budgetlab::kernel {

Tensor embedding_forward(std::span<const std::int64_t> tokens, const Tensor& table,
                         const EmbeddingNorm* norm) {
  const std::size_t d = table.cols();
  Tensor out(tokens.size(), d);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto id = tokens[i];
    if (id < 0 || static_cast<std::size_t>(id) >= table.rows()) {
      throw ValidationError("token id " + std::to_string(id) + " outside vocabulary of " +
                            std::to_string(table.rows()));
    }
    const auto src = table.row(static_cast<std::size_t>(id));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  if (norm != nullptr) return layer_norm(out, norm->gain, norm->bias);
  return out;
}

Tensor tied_logits(const Tensor& hidden, const Tensor& table) {
  return matmul_transposed(hidden, table);
}

}  // namespace budgetlab::kernel
