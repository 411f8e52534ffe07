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

#ifndef BUDGETLAB_BUDGET_SCHEDULE_H_
#define BUDGETLAB_BUDGET_SCHEDULE_H_

#include <filesystem>
#include <iosfwd>
#include <string>

namespace budgetlab::budget {

// Learning-rate and batch-size schedule, all positions measured in tokens.
// total_tokens and batch_start are not fixed by the reference recipe and are
// left as explicit knobs.
struct ScheduleConfig {
  double lr_max = 2e-4;
  double lr_min = 1e-5;
  double warmup_tokens = 375e6;
  double total_tokens = 112e9;
  double batch_target = 1'048'576.0;
  double batch_ramp_tokens = 4e9;
  double batch_start = 65'536.0;
  // Optimizer metadata; nothing in this library consumes them.
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.1;
  double grad_clip = 1.0;

  void validate() const;
};

// Linear warmup to lr_max, cosine decay to lr_min at total_tokens, then flat.
double lr_at(double tokens_seen, const ScheduleConfig& cfg = {});

// Linear ramp from batch_start to batch_target over batch_ramp_tokens.
double batch_at(double tokens_seen, const ScheduleConfig& cfg = {});

// key = value lines; '#' starts a comment. Unknown keys are a ParseError.
ScheduleConfig parse_schedule_config(std::istream& in, ScheduleConfig base = {});
ScheduleConfig load_schedule_config(const std::filesystem::path& path);
std::string to_config_text(const ScheduleConfig& cfg);

}  // namespace budgetlab::budget

#endif  // BUDGETLAB_BUDGET_SCHEDULE_H_
