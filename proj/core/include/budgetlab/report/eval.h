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

#ifndef BUDGETLAB_REPORT_EVAL_H_
#define BUDGETLAB_REPORT_EVAL_H_

#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace budgetlab::report {

enum class Metric { kAcc, kAccNorm, kF1 };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

// One (model, task, metric) cell of an evaluation results table.
struct EvalRecord {
  std::string model;
  std::string task;
  Metric metric = Metric::kAcc;
  double value = 0.0;  // fraction in [0, 1]
};

// Reads `model,task,metric,value`. Rejects malformed rows (ParseError with the
// line number), values outside [0, 1] (ValidationError) and repeated
// (model, task, metric) keys (ValidationError naming the key).
std::vector<EvalRecord> parse_eval_csv(std::istream& in);
std::vector<EvalRecord> load_eval_csv(const std::filesystem::path& path);

struct ReportRow {
  std::string model;
  double average_acc = 0.0;  // percent, full precision
  int n_tasks = 0;
};

// Mean over the model's records whose metric is in `metrics`, as a percent.
// The default averages plain accuracy only; pass {kAcc, kF1} to fold in
// F1-only tasks.
ReportRow average_accuracy(std::span<const EvalRecord> records, std::string_view model,
                           const std::set<Metric>& metrics = {Metric::kAcc});

// Models in first-appearance order.
std::vector<std::string> models_in(std::span<const EvalRecord> records);

struct ComparisonEntry {
  ReportRow row;
  // Rows sharing a non-empty group compete for best-in-group. Rows with an
  // empty group only compete overall.
  std::string group;
};

struct ComparisonLine {
  ComparisonEntry entry;
  bool best_in_group = false;
  bool best_overall = false;
};

struct ComparisonTable {
  std::vector<ComparisonLine> lines;  // grouped, groups in first-appearance order

  std::string to_text() const;
  std::string to_csv() const;
};

ComparisonTable comparison_table(std::span<const ComparisonEntry> entries);

// Reads a summary table with at least `model,group,avg_acc` columns.
std::vector<ComparisonEntry> load_comparison_csv(const std::filesystem::path& path);

// "45.31": two decimals, as printed in the results tables.
std::string format_percent(double percent);

}  // namespace budgetlab::report

#endif  // BUDGETLAB_REPORT_EVAL_H_
