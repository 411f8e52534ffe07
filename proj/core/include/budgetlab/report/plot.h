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

#ifndef BUDGETLAB_REPORT_PLOT_H_
#define BUDGETLAB_REPORT_PLOT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace budgetlab::report {

struct PlotPoint {
  std::string series;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlotPoint&, const PlotPoint&) = default;
};

// `series,x,y` with 17 significant digits; rows keep the input order.
std::string plot_csv_text(std::span<const PlotPoint> points);
void emit_plot_csv(std::span<const PlotPoint> points, const std::filesystem::path& path);
std::vector<PlotPoint> load_plot_csv(const std::filesystem::path& path);

}  // namespace budgetlab::report

#endif  // BUDGETLAB_REPORT_PLOT_H_
