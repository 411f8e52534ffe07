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

#include "budgetlab/shape/search.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "budgetlab/budget/planner.h"
#include "budgetlab/error.h"
#include "budgetlab/kernel/ffn.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::shape {

std::int64_t param_count(const ModelShape& shape) {
  shape.validate();
  const std::int64_t h = shape.d_model;
  const std::int64_t f = shape.d_ff;
  const std::int64_t embedding = shape.vocab * h * (shape.tied_embeddings ? 1 : 2);
  const std::int64_t attention = 4 * h * h + 4 * h;
  const std::int64_t ffn =
      shape.activation == Activation::kSwiGlu ? 3 * h * f + f : 2 * h * f + h + f;
  const std::int64_t norms = 4 * h;
  return embedding + shape.n_layer * (attention + ffn + norms) + 2 * h;
}

std::int64_t depth_recommendation(double n_params, const DepthRule& rule) {
  if (!(n_params > 0.0) || !(rule.anchor_params > 0.0)) {
    throw DomainError("depth_recommendation requires positive parameter counts");
  }
  const double depth = rule.anchor_depth + rule.slope * std::log(n_params / rule.anchor_params);
  return static_cast<std::int64_t>(std::llround(depth));
}

std::vector<std::int64_t> SearchConstraints::DefaultHeadDims() {
  std::vector<std::int64_t> dims;
  for (std::int64_t d = 96; d <= 224; d += 8) dims.push_back(d);
  return dims;
}

std::vector<ModelShape> enumerate_candidates(const SearchConstraints& c) {
  if (c.min_layers < 1 || c.max_layers < c.min_layers) {
    throw DomainError("layer range must be non-empty and positive");
  }
  if (!(c.max_params >= c.min_params) || c.hidden_alignment < 1 || c.head_dims.empty()) {
    throw DomainError("search constraints need a parameter range, alignment and head dims");
  }
  std::vector<std::int64_t> head_dims = c.head_dims;
  std::sort(head_dims.begin(), head_dims.end(), std::greater<>());
  head_dims.erase(std::unique(head_dims.begin(), head_dims.end()), head_dims.end());

  auto make = [&](std::int64_t layers, std::int64_t hidden, std::int64_t head_dim) {
    ModelShape s;
    s.n_layer = layers;
    s.d_model = hidden;
    s.head_dim = head_dim;
    s.n_heads = hidden / head_dim;
    s.d_ff = c.activation == Activation::kSwiGlu ? kernel::swiglu_hidden_size(hidden)
                                                  : 4 * hidden;
    s.n_ctx = c.n_ctx;
    s.vocab = c.vocab;
    s.activation = c.activation;
    return s;
  };

  std::vector<ModelShape> out;
  for (std::int64_t layers = c.min_layers; layers <= c.max_layers; ++layers) {
    for (std::int64_t hidden = c.hidden_alignment;; hidden += c.hidden_alignment) {
      const auto n = static_cast<double>(param_count(make(layers, hidden, hidden)));
      if (n > c.max_params) break;
      if (n < c.min_params) continue;
      // Descending head_dim gives ascending head count.
      for (const std::int64_t head_dim : head_dims) {
        if (head_dim > 0 && hidden % head_dim == 0) out.push_back(make(layers, hidden, head_dim));
      }
    }
  }
  return out;
}

QuantizationFlags quantization_flags(std::int64_t dim, std::int64_t warp_size,
                                     std::int64_t n_sm) {
  if (dim <= 0 || warp_size <= 0 || n_sm <= 0) {
    throw DomainError("quantization_flags requires positive sizes");
  }
  return QuantizationFlags{dim % warp_size == 0, dim % n_sm == 0};
}

CandidateRow select_final(std::span<const CandidateRow> rows, const SelectionRules& rules) {
  if (rows.empty()) throw NoCandidateError("no candidate rows to select from");
  const CandidateRow* best = nullptr;
  for (const auto& row : rows) {
    if (row.shape.head_dim > rules.max_head_dim || !row.tflops) continue;
    if (best == nullptr || *row.tflops > *best->tflops ||
        (*row.tflops == *best->tflops && row.shape.n_layer < best->shape.n_layer)) {
      best = &row;
    }
  }
  if (best == nullptr) {
    throw NoCandidateError(fmt::format(
        "every candidate has head_dim > {} or no throughput measurement", rules.max_head_dim));
  }
  return *best;
}

ConsistencyReport consistency_check(std::span<const CandidateRow> rows,
                                    const ConsistencyOptions& options) {
  ConsistencyReport report;
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>,
           std::vector<const CandidateRow*>>
      groups;
  for (const auto& row : rows) {
    if (!row.step_time || !row.tflops) continue;
    ++report.rows_checked;
    groups[{row.shape.n_layer, row.shape.d_model, row.shape.d_ff, row.shape.vocab}].push_back(
        &row);

    const double flop = budget::hardware_flop_per_iteration(row.shape, options.batch_sequences);
    const double expected = budget::achieved_tflops(flop, *row.step_time, row.plan.n_gpus());
    const double rel = std::abs(expected - *row.tflops) / *row.tflops;
    if (rel > options.flop_tolerance) {
      report.violations.push_back(ConsistencyViolation{
          row.label, fmt::format("reported {:.1f} TFLOPs but the estimate at B={} gives {:.1f} "
                                 "({:.1f}% off)",
                                 *row.tflops, options.batch_sequences, expected, 100.0 * rel)});
    }
  }

  for (const auto& [key, members] : groups) {
    ++report.groups_checked;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto* row : members) {
      const double product = *row->step_time * *row->tflops;
      lo = std::min(lo, product);
      hi = std::max(hi, product);
    }
    if (hi / lo - 1.0 > options.product_tolerance) {
      report.violations.push_back(ConsistencyViolation{
          members.front()->label,
          fmt::format("step_time x tflops spans {:.0f}..{:.0f} ({:.2f}%) across {} rows", lo, hi,
                      100.0 * (hi / lo - 1.0), members.size())});
    }
  }
  return report;
}

std::vector<CandidateRow> load_benchmark_csv(const std::filesystem::path& path,
                                             const MemoryModel& model) {
  const auto table = report::CsvTable::Load(path);
  table.require_columns({"size_bparams", "layers", "hidden", "heads", "head_dim", "dp", "tp", "pp",
                         "mbs", "mem_gb", "step_time", "tflops"});
  auto optional_number = [&](const report::CsvRow& row,
                             std::string_view name) -> std::optional<double> {
    const auto& text = table.at(row, name);
    if (report::trim(text).empty()) return std::nullopt;
    return report::parse_double(text, row.line);
  };
  auto integer = [&](const report::CsvRow& row, std::string_view name) {
    return static_cast<std::int64_t>(report::parse_int(table.at(row, name), row.line));
  };

  std::vector<CandidateRow> rows;
  for (const auto& row : table.rows()) {
    CandidateRow c;
    c.shape.n_layer = integer(row, "layers");
    c.shape.d_model = integer(row, "hidden");
    c.shape.n_heads = integer(row, "heads");
    c.shape.head_dim = integer(row, "head_dim");
    c.shape.d_ff = 4 * c.shape.d_model;
    try {
      c.shape.validate();
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), row.line);
    }
    c.plan = ParallelismPlan{integer(row, "dp"), integer(row, "tp"), integer(row, "pp"),
                             integer(row, "mbs")};
    c.label = table.column("config")
                  ? "(" + table.at(row, "config") + ")"
                  : fmt::format("line {}", row.line);
    c.published_size_b = optional_number(row, "size_bparams");
    c.measured_memory_gb = optional_number(row, "mem_gb");
    c.measured_oom = table.column("oom") && table.at(row, "oom") == "1";
    c.step_time = optional_number(row, "step_time");
    c.tflops = optional_number(row, "tflops");
    c.memory = memory_per_gpu(c.shape, c.plan, model);
    rows.push_back(std::move(c));
  }
  return rows;
}

std::string candidates_csv(std::span<const CandidateRow> rows) {
  std::string out = "size_bparams,layers,hidden,heads,head_dim,dp,tp,pp,mbs,mem_gb,oom\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n",
                       report::format_exact(static_cast<double>(param_count(r.shape)) / 1e9),
                       r.shape.n_layer, r.shape.d_model, r.shape.n_heads, r.shape.head_dim,
                       r.plan.dp, r.plan.tp, r.plan.pp, r.plan.micro_batch,
                       report::format_exact(r.memory.total), r.memory.oom ? 1 : 0);
  }
  return out;
}

}  // namespace budgetlab::shape
