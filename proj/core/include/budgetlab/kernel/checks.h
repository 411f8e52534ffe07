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

#ifndef BUDGETLAB_KERNEL_CHECKS_H_
#define BUDGETLAB_KERNEL_CHECKS_H_

#include <cstdint>
#include <string>
#include <vector>

namespace budgetlab::kernel {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct KernelCheckReport {
  std::vector<CheckResult> results;
  double seconds = 0.0;

  bool passed() const;
  std::string to_text() const;
};

// Runs the invariant suite: causality under perturbation for every
// positional strategy, rotary shift invariance, ALiBi bias structure, softmax
// normalization, gradient checks for every registered op at 1e-4, and finite
// forward outputs at four times the training length.
KernelCheckReport run_kernel_checks(std::uint64_t seed = 1);

}  // namespace budgetlab::kernel

#endif  // BUDGETLAB_KERNEL_CHECKS_H_
