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

#ifndef BUDGETLAB_KERNEL_GRAD_CHECK_H_
#define BUDGETLAB_KERNEL_GRAD_CHECK_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "budgetlab/kernel/tensor.h"

namespace budgetlab::kernel {

inline constexpr double kFiniteDifferenceStep = 1e-5;

struct GradMismatch {
  std::string coordinate;  // "input<i>[r,c]"
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

struct GradCheckReport {
  std::string op_id;
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
  double tolerance = 0.0;
  std::vector<GradMismatch> offenders;

  bool passed() const { return offenders.empty(); }
};

// Operation ids understood by the checker, e.g. "linear", "gelu",
// "swiglu_ffn", "attention_alibi", "tiny_lm_rotary".
std::vector<std::string> grad_check_ops();

// A seeded random input point with the shapes `op_id` expects.
std::vector<Tensor> default_grad_point(std::string_view op_id, std::uint64_t seed = 1);

// Compares reverse-mode gradients with central differences. Tensor-valued
// ops are reduced to a scalar through a fixed random weighting first. The
// per-coordinate error is |a - n| / max(|a|, |n|, 1e-6).
GradCheckReport evaluate_grad_check(std::string_view op_id, const std::vector<Tensor>& point,
                                    double tolerance);

// Same as evaluate_grad_check but throws CheckFailure naming the offending
// coordinates when any exceeds the tolerance.
GradCheckReport grad_check(std::string_view op_id, const std::vector<Tensor>& point,
                           double tolerance);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_GRAD_CHECK_H_
