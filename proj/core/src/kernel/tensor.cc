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

#include "budgetlab/kernel/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "budgetlab/error.h"

namespace budgetlab::kernel {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : shape_{rows, cols}, data_(rows * cols, fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, double fill) : shape_(std::move(shape)) {
  const auto n = std::accumulate(shape_.begin(), shape_.end(), std::size_t{1},
                                 std::multiplies<>());
  data_.assign(n, fill);
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : shape_{rows, cols}, data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ConfigError("tensor data length " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

Tensor Tensor::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(n_rows * n_cols);
  for (const auto& r : rows) {
    if (r.size() != n_cols) throw ConfigError("ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor(n_rows, n_cols, std::move(data));
}

std::size_t Tensor::rows() const {
  if (shape_.empty()) return 0;
  if (shape_.size() == 1) return 1;
  return std::accumulate(shape_.begin(), shape_.end() - 1, std::size_t{1},
                         std::multiplies<>());
}

std::size_t Tensor::cols() const { return shape_.empty() ? 0 : shape_.back(); }

bool Tensor::all_finite() const {
  for (const double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw ConfigError("matmul shape mismatch: " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                      std::to_string(b.cols()));
  }
  const std::size_t n = a.rows();
  const std::size_t k = a.cols();
  const std::size_t m = b.cols();
  Tensor out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double* dst = &out(i, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      if (aip == 0.0) continue;
      const double* src = b.row(p).data();
      for (std::size_t j = 0; j < m; ++j) dst[j] += aip * src[j];
    }
  }
  return out;
}

Tensor matmul_transposed(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) throw ConfigError("matmul_transposed shape mismatch");
  const std::size_t n = a.rows();
  const std::size_t m = b.rows();
  const std::size_t k = a.cols();
  Tensor out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a(i, p) * b(j, p);
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  Tensor out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

}  // namespace budgetlab::kernel
