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

#include "budgetlab/scaling/power_law.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::scaling {

std::vector<ScalingPoint> pareto_frontier(std::span<const ScalingPoint> points) {
  std::vector<ScalingPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.compute < b.compute || (a.compute == b.compute && a.loss < b.loss);
  });

  std::vector<ScalingPoint> frontier;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i].compute == sorted[i - 1].compute) continue;
    if (sorted[i].loss < best) {
      best = sorted[i].loss;
      frontier.push_back(sorted[i]);
    }
  }
  return frontier;
}

PowerLawFit fit_power_law(std::span<const ScalingPoint> points) {
  const auto n = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.compute > 0.0) || !(p.loss > 0.0)) {
      throw DomainError("power-law fit requires positive compute and loss");
    }
    mean_x += std::log(p.compute);
    mean_y += std::log(p.loss);
  }
  if (points.size() < 2) throw DegenerateFitError("power-law fit needs at least two points");
  mean_x /= n;
  mean_y /= n;

  // Centered sums keep the normal equations well conditioned.
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.compute) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(p.loss) - mean_y);
  }
  if (!(sxx > 0.0)) {
    throw DegenerateFitError("power-law fit needs at least two distinct compute values");
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double rss = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.loss) - (intercept + slope * std::log(p.compute));
    rss += r * r;
  }
  return PowerLawFit{std::exp(intercept), -slope, rss, static_cast<int>(points.size())};
}

double predict_loss(const PowerLawFit& fit, double compute) {
  if (!(compute > 0.0)) throw DomainError("predict_loss requires positive compute");
  return fit.c_m * std::pow(compute, -fit.alpha_c);
}

LanguageFits fit_per_language(std::span<const ScalingPoint> points,
                              const std::map<std::string, double>& proportions,
                              const FitOptions& options) {
  std::map<std::string, std::vector<ScalingPoint>> groups;
  for (const auto& p : points) groups[p.language].push_back(p);

  LanguageFits out;
  for (const auto& [language, group] : groups) {
    try {
      const auto used = options.frontier_only ? pareto_frontier(group) : group;
      LanguageFitRow row;
      row.language = language;
      if (const auto it = proportions.find(language); it != proportions.end()) {
        row.proportion = it->second;
      }
      row.fit = fit_power_law(used);
      out.rows.push_back(std::move(row));
    } catch (const DegenerateFitError& e) {
      out.failures.push_back(LanguageFitFailure{language, e.what()});
    }
  }
  return out;
}

Dispersion exponent_dispersion(std::span<const LanguageFitRow> rows, double threshold_percent) {
  std::vector<double> alphas;
  for (const auto& row : rows) {
    if (row.proportion && *row.proportion >= threshold_percent) {
      alphas.push_back(row.fit.alpha_c);
    }
  }
  if (alphas.empty()) {
    throw EmptySelectionError(
        fmt::format("no language with proportion >= {}%", threshold_percent));
  }
  Dispersion d;
  d.n_rows = static_cast<int>(alphas.size());
  for (const double a : alphas) d.mean += a;
  d.mean /= d.n_rows;
  double var = 0.0;
  for (const double a : alphas) var += (a - d.mean) * (a - d.mean);
  d.stddev = std::sqrt(var / d.n_rows);
  return d;
}

std::vector<ScalingPoint> load_scaling_csv(const std::filesystem::path& path) {
  const auto table = report::CsvTable::Load(path);
  table.require_header({"language", "compute_pf_days", "loss"});
  std::vector<ScalingPoint> points;
  points.reserve(table.rows().size());
  for (const auto& row : table.rows()) {
    ScalingPoint p;
    p.language = row.fields[0];
    p.compute = report::parse_double(row.fields[1], row.line);
    p.loss = report::parse_double(row.fields[2], row.line);
    if (!(p.compute > 0.0) || !(p.loss > 0.0)) {
      throw ParseError("compute and loss must be positive", row.line);
    }
    points.push_back(std::move(p));
  }
  return points;
}

std::vector<LanguageFitRow> load_language_fits(const std::filesystem::path& path) {
  const auto table = report::CsvTable::Load(path);
  table.require_columns({"language", "proportion", "alpha_c", "c_m"});
  std::vector<LanguageFitRow> rows;
  for (const auto& row : table.rows()) {
    LanguageFitRow r;
    r.language = table.at(row, "language");
    const double proportion = report::parse_double(table.at(row, "proportion"), row.line);
    if (!(proportion > 0.0 && proportion <= 100.0)) {
      throw ParseError("proportion must lie in (0, 100]", row.line);
    }
    r.proportion = proportion;
    r.fit.alpha_c = report::parse_double(table.at(row, "alpha_c"), row.line);
    r.fit.c_m = report::parse_double(table.at(row, "c_m"), row.line);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string language_fits_csv(std::span<const LanguageFitRow> rows) {
  std::string out = "language,proportion,alpha_c,c_m,rss,n_points\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", report::csv_escape(r.language),
                       r.proportion ? report::format_exact(*r.proportion) : std::string(),
                       report::format_exact(r.fit.alpha_c), report::format_exact(r.fit.c_m),
                       report::format_exact(r.fit.rss), r.fit.n_points);
  }
  return out;
}

}  // namespace budgetlab::scaling
