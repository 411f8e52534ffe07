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

#include "budgetlab/report/plot.h"

#include "budgetlab/error.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::report {

std::string plot_csv_text(std::span<const PlotPoint> points) {
  std::string out = "series,x,y\n";
  for (const auto& p : points) {
    out += csv_escape(p.series);
    out += ',';
    out += format_exact(p.x);
    out += ',';
    out += format_exact(p.y);
    out += '\n';
  }
  return out;
}

void emit_plot_csv(std::span<const PlotPoint> points, const std::filesystem::path& path) {
  if (points.empty()) throw ValidationError("refusing to write an empty plot series");
  write_text_file(path, plot_csv_text(points));
}

std::vector<PlotPoint> load_plot_csv(const std::filesystem::path& path) {
  const auto table = CsvTable::Load(path);
  table.require_header({"series", "x", "y"});
  std::vector<PlotPoint> points;
  points.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    points.push_back(PlotPoint{row.fields[0], parse_double(row.fields[1], row.line),
                               parse_double(row.fields[2], row.line)});
  }
  return points;
}

}  // namespace budgetlab::report
