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

#include "budgetlab/budget/schedule.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <string_view>
#include <utility>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::budget {
namespace {

struct Field {
  std::string_view key;
  double ScheduleConfig::*member;
};

constexpr Field kFields[] = {
    {"lr_max", &ScheduleConfig::lr_max},
    {"lr_min", &ScheduleConfig::lr_min},
    {"warmup_tokens", &ScheduleConfig::warmup_tokens},
    {"total_tokens", &ScheduleConfig::total_tokens},
    {"batch_target", &ScheduleConfig::batch_target},
    {"batch_ramp_tokens", &ScheduleConfig::batch_ramp_tokens},
    {"batch_start", &ScheduleConfig::batch_start},
    {"adam_beta1", &ScheduleConfig::adam_beta1},
    {"adam_beta2", &ScheduleConfig::adam_beta2},
    {"adam_eps", &ScheduleConfig::adam_eps},
    {"weight_decay", &ScheduleConfig::weight_decay},
    {"grad_clip", &ScheduleConfig::grad_clip},
};

}  // namespace

void ScheduleConfig::validate() const {
  if (!(lr_min > 0.0 && lr_min <= lr_max)) {
    throw ConfigError("schedule requires 0 < lr_min <= lr_max");
  }
  if (!(warmup_tokens >= 0.0 && warmup_tokens < total_tokens)) {
    throw ConfigError("schedule requires 0 <= warmup_tokens < total_tokens");
  }
  if (!(batch_start > 0.0 && batch_start <= batch_target)) {
    throw ConfigError("schedule requires 0 < batch_start <= batch_target");
  }
  if (batch_ramp_tokens < 0.0) throw ConfigError("batch_ramp_tokens must be non-negative");
}

double lr_at(double tokens_seen, const ScheduleConfig& cfg) {
  cfg.validate();
  if (tokens_seen < 0.0) throw DomainError("tokens_seen must be non-negative");
  if (tokens_seen < cfg.warmup_tokens) {
    return cfg.lr_max * tokens_seen / cfg.warmup_tokens;
  }
  if (tokens_seen >= cfg.total_tokens) return cfg.lr_min;
  const double progress =
      (tokens_seen - cfg.warmup_tokens) / (cfg.total_tokens - cfg.warmup_tokens);
  return cfg.lr_min +
         0.5 * (cfg.lr_max - cfg.lr_min) * (1.0 + std::cos(std::numbers::pi * progress));
}

double batch_at(double tokens_seen, const ScheduleConfig& cfg) {
  cfg.validate();
  if (tokens_seen < 0.0) throw DomainError("tokens_seen must be non-negative");
  if (tokens_seen >= cfg.batch_ramp_tokens) return cfg.batch_target;
  const double t = tokens_seen / cfg.batch_ramp_tokens;
  return cfg.batch_start + t * (cfg.batch_target - cfg.batch_start);
}

ScheduleConfig parse_schedule_config(std::istream& in, ScheduleConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = report::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected key = value", line_no);
    }
    const auto key = report::trim(view.substr(0, eq));
    const auto value = report::trim(view.substr(eq + 1));
    bool known = false;
    for (const auto& field : kFields) {
      if (field.key == key) {
        base.*field.member = report::parse_double(value, line_no);
        known = true;
        break;
      }
    }
    if (!known) throw ParseError("unknown schedule key '" + std::string(key) + "'", line_no);
  }
  base.validate();
  return base;
}

ScheduleConfig load_schedule_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  return parse_schedule_config(in);
}

std::string to_config_text(const ScheduleConfig& cfg) {
  std::string out;
  for (const auto& field : kFields) {
    out += fmt::format("{} = {:.17g}\n", field.key, cfg.*field.member);
  }
  return out;
}

}  // namespace budgetlab::budget
