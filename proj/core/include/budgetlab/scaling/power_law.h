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

#ifndef BUDGETLAB_SCALING_POWER_LAW_H_
#define BUDGETLAB_SCALING_POWER_LAW_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace budgetlab::scaling {

// One training run checkpoint: compute in PF-days, loss in nats/token.
struct ScalingPoint {
  double compute = 0.0;
  double loss = 0.0;
  std::optional<double> model_size;
  std::string language;
};

// L(C) = c_m * C^(-alpha_c). rss is measured in log space.
struct PowerLawFit {
  double c_m = 0.0;
  double alpha_c = 0.0;
  double rss = 0.0;
  int n_points = 0;
};

struct LanguageFitRow {
  std::string language;
  std::optional<double> proportion;  // percent of the corpus, when known
  PowerLawFit fit;
};

// Points achieving the best loss seen so far, scanning by increasing compute.
// Among equal-compute points only the lowest loss is considered. The result
// has strictly increasing compute and strictly decreasing loss.
std::vector<ScalingPoint> pareto_frontier(std::span<const ScalingPoint> points);

// Ordinary least squares of log L on log C. Throws DegenerateFitError with
// fewer than two distinct compute values, DomainError on non-positive data.
PowerLawFit fit_power_law(std::span<const ScalingPoint> points);

double predict_loss(const PowerLawFit& fit, double compute);

struct FitOptions {
  bool frontier_only = true;
};

struct LanguageFitFailure {
  std::string language;
  std::string message;
};

struct LanguageFits {
  std::vector<LanguageFitRow> rows;          // sorted by language tag
  std::vector<LanguageFitFailure> failures;  // languages whose fit was degenerate
};

// Groups points by language, optionally reduces each group to its frontier,
// then fits. A degenerate group is reported in `failures`; the rest still fit.
LanguageFits fit_per_language(std::span<const ScalingPoint> points,
                              const std::map<std::string, double>& proportions = {},
                              const FitOptions& options = {});

struct Dispersion {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  int n_rows = 0;
};

// Mean and spread of alpha_c over rows whose proportion >= threshold_percent.
// Throws EmptySelectionError if no row qualifies.
Dispersion exponent_dispersion(std::span<const LanguageFitRow> rows, double threshold_percent);

// `language,compute_pf_days,loss`
std::vector<ScalingPoint> load_scaling_csv(const std::filesystem::path& path);
// `language,proportion,alpha_c,c_m` (published fit table).
std::vector<LanguageFitRow> load_language_fits(const std::filesystem::path& path);
// `language,proportion,alpha_c,c_m,rss,n_points`
std::string language_fits_csv(std::span<const LanguageFitRow> rows);

}  // namespace budgetlab::scaling

#endif  // BUDGETLAB_SCALING_POWER_LAW_H_
