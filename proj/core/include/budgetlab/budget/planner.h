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

#ifndef BUDGETLAB_BUDGET_PLANNER_H_
#define BUDGETLAB_BUDGET_PLANNER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "budgetlab/budget/units.h"
#include "budgetlab/model_shape.h"

namespace budgetlab::budget {

// A dedicated cluster allocation. flops_per_gpu is the assumed sustained
// model throughput, in FLOP/s.
struct ClusterGrant {
  std::int64_t nodes = 0;
  std::int64_t gpus_per_node = 0;
  double duration_hours = 0.0;
  std::int64_t spare_nodes = 0;
  double flops_per_gpu = 0.0;

  void validate() const;
};

// (N, D, C) with C = 6ND.
struct TrainingPlan {
  double n_params = 0.0;
  double n_tokens = 0.0;
  Flop compute;
  PfDays compute_pf_days;

  static TrainingPlan FromParamsAndTokens(double n_params, double n_tokens);
};

struct FlopBreakdown {
  // Forward-pass FLOP per token (2 x (12 l d^2 + l n_ctx d)).
  double model_flop_per_token = 0.0;
  // Megatron-style estimate including activation recomputation.
  double hardware_flop_per_iteration = 0.0;
  // Share of the context-dependent term in the forward cost.
  double attention_share = 0.0;
};

// Power law N_opt(C) = n_ref * (C / c_ref)^exponent anchored at a known
// optimum. Defaults reproduce 392B parameters at 4,500 PF-days.
struct AllocationCalibration {
  PfDays c_ref{4'500.0};
  double n_ref = 392e9;
  double exponent = 0.73;
};

GpuHours grant_gpu_hours(const ClusterGrant& grant);

// gpu_hours * 3600 * flops_per_gpu, expressed in PF-days.
PfDays pf_days(GpuHours gpu_hours, double flops_per_gpu);

// pf * keep_fraction floored to a multiple of granularity.
PfDays apply_margin(PfDays pf, double keep_fraction, double granularity = 100.0);

Flop model_flop(double n_params, double n_tokens);
double tokens_for_budget(Flop compute, double n_params);
double params_for_budget(Flop compute, double n_tokens);

TrainingPlan optimal_allocation(Flop compute, const AllocationCalibration& calib = {});

FlopBreakdown flop_breakdown(const ModelShape& shape, std::int64_t batch_sequences);
FlopBreakdown forward_flop_per_token(const ModelShape& shape);

// 96 B s l h^2 (1 + s / 6h + V / 16 l h); uses shape.vocab.
double hardware_flop_per_iteration(const ModelShape& shape, std::int64_t batch_sequences);
double hardware_flop_per_iteration(const ModelShape& shape, std::int64_t batch_sequences,
                                   std::int64_t vocab);

// Per-GPU throughput in TFLOP/s.
double achieved_tflops(double flop_per_iteration, double step_time_s, std::int64_t n_gpus);

// Summary produced by the `plan` subcommand.
struct PlanOptions {
  double keep_fraction = 1.0;
  double granularity = 500.0;
  AllocationCalibration calibration;
  double min_tokens = 300e9;
  double max_tokens = 400e9;
};

struct BudgetReport {
  GpuHours gpu_hours;
  PfDays raw_budget;
  PfDays budget;
  TrainingPlan optimum;
  // Model sizes that spend the budget on exactly min_tokens / max_tokens.
  double params_at_min_tokens = 0.0;
  double params_at_max_tokens = 0.0;
};

BudgetReport plan_budget(const ClusterGrant& grant, const PlanOptions& options = {});

}  // namespace budgetlab::budget

#endif  // BUDGETLAB_BUDGET_PLANNER_H_
