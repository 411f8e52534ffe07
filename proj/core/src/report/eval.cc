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

#include "budgetlab/report/eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::report {

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kAcc:
      return "acc";
    case Metric::kAccNorm:
      return "acc_norm";
    case Metric::kF1:
      return "f1";
  }
  return "unknown";
}

Metric parse_metric(std::string_view text) {
  if (text == "acc") return Metric::kAcc;
  if (text == "acc_norm") return Metric::kAccNorm;
  if (text == "f1") return Metric::kF1;
  throw ValidationError("unknown metric '" + std::string(text) + "'");
}

std::vector<EvalRecord> parse_eval_csv(std::istream& in) {
  const auto table = CsvTable::Parse(in);
  table.require_header({"model", "task", "metric", "value"});

  std::vector<EvalRecord> records;
  records.reserve(table.rows().size());
  std::map<std::tuple<std::string, std::string, Metric>, std::size_t> seen;
  for (const auto& row : table.rows()) {
    EvalRecord rec;
    rec.model = row.fields[0];
    rec.task = row.fields[1];
    if (rec.model.empty() || rec.task.empty()) {
      throw ParseError("empty model or task", row.line);
    }
    try {
      rec.metric = parse_metric(row.fields[2]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), row.line);
    }
    rec.value = parse_double(row.fields[3], row.line);
    if (!(rec.value >= 0.0 && rec.value <= 1.0)) {
      throw ValidationError(fmt::format("value {} outside [0, 1] (line {})", row.fields[3],
                                        row.line));
    }
    const auto key = std::make_tuple(rec.model, rec.task, rec.metric);
    if (const auto [it, inserted] = seen.emplace(key, row.line); !inserted) {
      throw ValidationError(fmt::format("duplicate record ({}, {}, {}) on lines {} and {}",
                                        rec.model, rec.task, to_string(rec.metric), it->second,
                                        row.line));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EvalRecord> load_eval_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_eval_csv(in);
}

ReportRow average_accuracy(std::span<const EvalRecord> records, std::string_view model,
                           const std::set<Metric>& metrics) {
  double sum = 0.0;
  int count = 0;
  for (const auto& rec : records) {
    if (rec.model == model && metrics.contains(rec.metric)) {
      sum += rec.value;
      ++count;
    }
  }
  if (count == 0) {
    throw EmptySelectionError("no records for model '" + std::string(model) + "'");
  }
  return ReportRow{std::string(model), 100.0 * sum / count, count};
}

std::vector<std::string> models_in(std::span<const EvalRecord> records) {
  std::vector<std::string> models;
  for (const auto& rec : records) {
    if (std::find(models.begin(), models.end(), rec.model) == models.end()) {
      models.push_back(rec.model);
    }
  }
  return models;
}

std::string format_percent(double percent) { return fmt::format("{:.2f}", percent); }

ComparisonTable comparison_table(std::span<const ComparisonEntry> entries) {
  if (entries.empty()) throw EmptySelectionError("comparison table needs at least one row");

  std::vector<std::string> groups;
  for (const auto& e : entries) {
    if (std::find(groups.begin(), groups.end(), e.group) == groups.end()) {
      groups.push_back(e.group);
    }
  }

  // Compare at display precision so ties in the printed table are ties here.
  auto key = [](const ComparisonEntry& e) { return std::round(e.row.average_acc * 100.0); };

  double best_overall = -1.0;
  std::map<std::string, double> best_in_group;
  for (const auto& e : entries) {
    best_overall = std::max(best_overall, key(e));
    if (!e.group.empty()) {
      auto [it, inserted] = best_in_group.emplace(e.group, key(e));
      if (!inserted) it->second = std::max(it->second, key(e));
    }
  }

  ComparisonTable table;
  for (const auto& group : groups) {
    for (const auto& e : entries) {
      if (e.group != group) continue;
      ComparisonLine line{e};
      line.best_overall = key(e) == best_overall;
      line.best_in_group = !e.group.empty() ? key(e) == best_in_group.at(e.group)
                                            : line.best_overall;
      table.lines.push_back(std::move(line));
    }
  }
  return table;
}

std::string ComparisonTable::to_text() const {
  std::size_t width = 5;
  for (const auto& line : lines) width = std::max(width, line.entry.row.model.size());
  std::string out = fmt::format("{:<{}}  {:<8}  {:>8}  {}\n", "model", width, "group", "avg_acc",
                                "marks");
  for (const auto& line : lines) {
    std::string marks;
    if (line.best_in_group) marks += "best-in-group";
    if (line.best_overall) marks += marks.empty() ? "best-overall" : " best-overall";
    out += fmt::format("{:<{}}  {:<8}  {:>8}  {}\n", line.entry.row.model, width,
                       line.entry.group.empty() ? "-" : line.entry.group,
                       format_percent(line.entry.row.average_acc), marks);
  }
  return out;
}

std::string ComparisonTable::to_csv() const {
  std::string out = "model,group,avg_acc,n_tasks,best_in_group,best_overall\n";
  for (const auto& line : lines) {
    out += fmt::format("{},{},{},{},{},{}\n", csv_escape(line.entry.row.model),
                       csv_escape(line.entry.group), format_percent(line.entry.row.average_acc),
                       line.entry.row.n_tasks, line.best_in_group ? 1 : 0,
                       line.best_overall ? 1 : 0);
  }
  return out;
}

std::vector<ComparisonEntry> load_comparison_csv(const std::filesystem::path& path) {
  const auto table = CsvTable::Load(path);
  table.require_columns({"model", "group", "avg_acc"});
  std::vector<ComparisonEntry> entries;
  for (const auto& row : table.rows()) {
    ComparisonEntry e;
    e.row.model = table.at(row, "model");
    e.row.average_acc = parse_double(table.at(row, "avg_acc"), row.line);
    e.group = table.at(row, "group");
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace budgetlab::report
