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

#include "budgetlab/budget/planner.h"

#include <cmath>

#include "budgetlab/error.h"

namespace budgetlab::budget {

void ClusterGrant::validate() const {
  if (nodes <= 0 || gpus_per_node <= 0 || duration_hours <= 0.0 || spare_nodes < 0 ||
      flops_per_gpu <= 0.0) {
    throw InvalidGrantError("cluster grant requires positive nodes, GPUs, duration and FLOP/s");
  }
  if (spare_nodes >= nodes) {
    throw InvalidGrantError("spare nodes (" + std::to_string(spare_nodes) +
                            ") must be fewer than nodes (" + std::to_string(nodes) + ")");
  }
}

TrainingPlan TrainingPlan::FromParamsAndTokens(double n_params, double n_tokens) {
  TrainingPlan plan;
  plan.n_params = n_params;
  plan.n_tokens = n_tokens;
  plan.compute = model_flop(n_params, n_tokens);
  plan.compute_pf_days = to_pf_days(plan.compute);
  return plan;
}

GpuHours grant_gpu_hours(const ClusterGrant& grant) {
  grant.validate();
  const auto usable = static_cast<double>(grant.nodes - grant.spare_nodes);
  return GpuHours{usable * static_cast<double>(grant.gpus_per_node) * grant.duration_hours};
}

PfDays pf_days(GpuHours gpu_hours, double flops_per_gpu) {
  if (!(gpu_hours.value > 0.0) || !(flops_per_gpu > 0.0)) {
    throw DomainError("pf_days requires positive GPU-hours and FLOP/s");
  }
  return to_pf_days(Flop{gpu_hours.value * kSecondsPerHour * flops_per_gpu});
}

PfDays apply_margin(PfDays pf, double keep_fraction, double granularity) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw DomainError("keep_fraction must lie in (0, 1]");
  }
  if (!(granularity > 0.0)) throw DomainError("granularity must be positive");
  const double kept = pf.value * keep_fraction;
  // Guard against 4500 * 1.0 landing on 4499.999... and flooring a whole step.
  const double steps = std::floor(kept / granularity * (1.0 + 1e-12));
  return PfDays{steps * granularity};
}

Flop model_flop(double n_params, double n_tokens) {
  if (!(n_params > 0.0) || !(n_tokens > 0.0)) {
    throw DomainError("model_flop requires positive parameters and tokens");
  }
  return Flop{6.0 * n_params * n_tokens};
}

double tokens_for_budget(Flop compute, double n_params) {
  if (!(compute.value > 0.0) || !(n_params > 0.0)) {
    throw DomainError("tokens_for_budget requires positive inputs");
  }
  return compute.value / (6.0 * n_params);
}

double params_for_budget(Flop compute, double n_tokens) {
  if (!(compute.value > 0.0) || !(n_tokens > 0.0)) {
    throw DomainError("params_for_budget requires positive inputs");
  }
  return compute.value / (6.0 * n_tokens);
}

TrainingPlan optimal_allocation(Flop compute, const AllocationCalibration& calib) {
  if (!(calib.c_ref.value > 0.0) || !(calib.n_ref > 0.0)) {
    throw DomainError("allocation calibration requires positive anchors");
  }
  if (!(calib.exponent > 0.0 && calib.exponent < 1.0)) {
    throw DomainError("allocation exponent must lie in (0, 1)");
  }
  if (!(compute.value > 0.0)) throw DomainError("compute must be positive");

  const double ratio = compute.value / to_flop(calib.c_ref).value;
  const double n_params = calib.n_ref * std::pow(ratio, calib.exponent);
  TrainingPlan plan;
  plan.n_params = n_params;
  plan.n_tokens = compute.value / (6.0 * n_params);
  plan.compute = compute;
  plan.compute_pf_days = to_pf_days(compute);
  return plan;
}

FlopBreakdown flop_breakdown(const ModelShape& shape, std::int64_t batch_sequences) {
  const auto l = static_cast<double>(shape.n_layer);
  const auto d = static_cast<double>(shape.d_model);
  const auto ctx = static_cast<double>(shape.n_ctx);

  FlopBreakdown out;
  out.model_flop_per_token = 2.0 * (12.0 * l * d * d + l * ctx * d);
  out.attention_share = ctx / (12.0 * d + ctx);
  out.hardware_flop_per_iteration = hardware_flop_per_iteration(shape, batch_sequences);
  return out;
}

FlopBreakdown forward_flop_per_token(const ModelShape& shape) {
  return flop_breakdown(shape, 0);
}

double hardware_flop_per_iteration(const ModelShape& shape, std::int64_t batch_sequences) {
  return hardware_flop_per_iteration(shape, batch_sequences, shape.vocab);
}

double hardware_flop_per_iteration(const ModelShape& shape, std::int64_t batch_sequences,
                                   std::int64_t vocab) {
  if (batch_sequences < 0) throw DomainError("batch size must be non-negative");
  if (batch_sequences == 0) return 0.0;
  const auto b = static_cast<double>(batch_sequences);
  const auto s = static_cast<double>(shape.n_ctx);
  const auto l = static_cast<double>(shape.n_layer);
  const auto h = static_cast<double>(shape.d_model);
  const auto v = static_cast<double>(vocab);
  return 96.0 * b * s * l * h * h * (1.0 + s / (6.0 * h) + v / (16.0 * l * h));
}

double achieved_tflops(double flop_per_iteration, double step_time_s, std::int64_t n_gpus) {
  if (!(step_time_s > 0.0) || n_gpus <= 0) {
    throw DomainError("achieved_tflops requires positive step time and GPU count");
  }
  return flop_per_iteration / (step_time_s * static_cast<double>(n_gpus)) / 1e12;
}

BudgetReport plan_budget(const ClusterGrant& grant, const PlanOptions& options) {
  BudgetReport report;
  report.gpu_hours = grant_gpu_hours(grant);
  report.raw_budget = pf_days(report.gpu_hours, grant.flops_per_gpu);
  report.budget = apply_margin(report.raw_budget, options.keep_fraction, options.granularity);
  if (!(report.budget.value > 0.0)) {
    throw DomainError("budget after margin rounds down to zero");
  }
  const Flop compute = to_flop(report.budget);
  report.optimum = optimal_allocation(compute, options.calibration);
  report.params_at_min_tokens = params_for_budget(compute, options.min_tokens);
  report.params_at_max_tokens = params_for_budget(compute, options.max_tokens);
  return report;
}

}  // namespace budgetlab::budget
