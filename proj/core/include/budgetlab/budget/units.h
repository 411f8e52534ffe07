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

#ifndef BUDGETLAB_BUDGET_UNITS_H_
#define BUDGETLAB_BUDGET_UNITS_H_

namespace budgetlab::budget {

// One PFLOP/s sustained for 86,400 s.
inline constexpr double kFlopPerPfDay = 1e15 * 86'400.0;
inline constexpr double kSecondsPerHour = 3'600.0;
inline constexpr double kHoursPerWeek = 168.0;

struct Flop {
  double value = 0.0;
  friend constexpr auto operator<=>(Flop, Flop) = default;
};

struct PfDays {
  double value = 0.0;
  friend constexpr auto operator<=>(PfDays, PfDays) = default;
};

struct GpuHours {
  double value = 0.0;
  friend constexpr auto operator<=>(GpuHours, GpuHours) = default;
};

constexpr PfDays to_pf_days(Flop c) { return PfDays{c.value / kFlopPerPfDay}; }
constexpr Flop to_flop(PfDays c) { return Flop{c.value * kFlopPerPfDay}; }

}  // namespace budgetlab::budget

#endif  // BUDGETLAB_BUDGET_UNITS_H_
