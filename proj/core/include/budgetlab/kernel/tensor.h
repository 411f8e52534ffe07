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

#ifndef BUDGETLAB_KERNEL_TENSOR_H_
#define BUDGETLAB_KERNEL_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace budgetlab::kernel {

// Dense row-major tensor of doubles. Most kernel code works on 2-D
// (rows x cols) tensors; a 1-D tensor of length n is treated as 1 x n.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t rows() const;
  std::size_t cols() const;

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  void fill(double value);

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

Tensor matmul(const Tensor& a, const Tensor& b);
// a * b^T
Tensor matmul_transposed(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_TENSOR_H_
