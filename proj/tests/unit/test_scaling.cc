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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "budgetlab/error.h"
#include "budgetlab/scaling/power_law.h"

namespace budgetlab::scaling {
namespace {

const std::filesystem::path kData = BUDGETLAB_TEST_DATA_DIR;

std::vector<ScalingPoint> exact_law(double c_m, double alpha, std::vector<double> computes,
                                    const std::string& language = "") {
  std::vector<ScalingPoint> pts;
  for (double c : computes) pts.push_back({c, c_m * std::pow(c, -alpha), std::nullopt, language});
  return pts;
}

TEST(ParetoFrontier, Examples) {
  const std::vector<ScalingPoint> one{{1, 3.0}};
  ASSERT_EQ(pareto_frontier(one).size(), 1u);

  const std::vector<ScalingPoint> three{{1, 3.0}, {2, 3.5}, {3, 2.5}};
  const auto f = pareto_frontier(three);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].compute, 1.0);
  EXPECT_EQ(f[1].compute, 3.0);

  const std::vector<ScalingPoint> ties{{1, 3.0}, {1, 2.9}, {2, 2.9}};
  const auto t = pareto_frontier(ties);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].loss, 2.9);

  EXPECT_TRUE(pareto_frontier(std::vector<ScalingPoint>{}).empty());
}

TEST(ParetoFrontier, SortedStrictlyDecreasingAndUndominated) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(0.1, 100.0);
  std::uniform_real_distribution<double> l(1.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScalingPoint> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({std::round(c(rng)), l(rng)});
    const auto f = pareto_frontier(pts);
    for (std::size_t i = 1; i < f.size(); ++i) {
      EXPECT_LT(f[i - 1].compute, f[i].compute);
      EXPECT_LT(f[i].loss, f[i - 1].loss);
    }
    // Brute-force oracle: a point is on the frontier iff no point with
    // compute <= its compute has loss <= its loss (other than an identical
    // earlier point).
    std::size_t expected = 0;
    std::vector<ScalingPoint> seen;
    for (const auto& p : pts) {
      bool dominated = false;
      for (const auto& q : pts) {
        if (&q != &p && q.compute <= p.compute && q.loss < p.loss) dominated = true;
        if (&q < &p && q.compute <= p.compute && q.loss == p.loss) dominated = true;
      }
      if (!dominated) ++expected;
    }
    EXPECT_EQ(f.size(), expected);
  }
}

TEST(FitPowerLaw, ExactRecovery) {
  const auto fit = fit_power_law(exact_law(1.08, 0.051, {1, 10, 100, 1000}));
  EXPECT_NEAR(fit.c_m, 1.08, 1e-9);
  EXPECT_NEAR(fit.alpha_c, 0.051, 1e-9);
  EXPECT_NEAR(fit.rss, 0.0, 1e-20);
  EXPECT_EQ(fit.n_points, 4);
}

TEST(FitPowerLaw, FlatLaw) {
  const std::vector<ScalingPoint> pts{{1.0, 2.0}, {std::exp(1.0), 2.0}};
  const auto fit = fit_power_law(pts);
  EXPECT_NEAR(fit.alpha_c, 0.0, 1e-15);
  EXPECT_NEAR(fit.c_m, 2.0, 1e-15);
}

TEST(FitPowerLaw, NoisyRecoveryWithinTolerance) {
  std::mt19937_64 rng(20221024);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<ScalingPoint> pts;
  for (int i = 0; i < 50; ++i) {
    const double c = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
    pts.push_back({c, 1.1 * std::pow(c, -0.05) * std::exp(noise(rng))});
  }
  EXPECT_NEAR(fit_power_law(pts).alpha_c, 0.05, 0.005);
}

TEST(FitPowerLaw, Errors) {
  EXPECT_THROW(fit_power_law(exact_law(1.0, 0.1, {5.0})), DegenerateFitError);
  const std::vector<ScalingPoint> same{{2.0, 1.0}, {2.0, 1.1}};
  EXPECT_THROW(fit_power_law(same), DegenerateFitError);
  const std::vector<ScalingPoint> bad{{1.0, 1.0}, {-2.0, 1.0}};
  EXPECT_THROW(fit_power_law(bad), DomainError);
}

TEST(FitPowerLaw, ScaleCovariance) {
  const auto pts = exact_law(1.2, 0.06, {0.5, 3, 40, 900});
  const auto base = fit_power_law(pts);
  for (double k : {1e-3, 7.0, 1e4}) {
    auto scaled = pts;
    for (auto& p : scaled) p.compute *= k;
    const auto fit = fit_power_law(scaled);
    EXPECT_NEAR(fit.alpha_c, base.alpha_c, 1e-9);
    EXPECT_NEAR(fit.c_m, base.c_m * std::pow(k, base.alpha_c), 1e-9);
  }
}

TEST(PredictLoss, Examples) {
  EXPECT_DOUBLE_EQ(predict_loss({1.08, 0.051, 0.0, 2}, 1.0), 1.08);
  EXPECT_NEAR(predict_loss({1.28, 0.069, 0.0, 2}, 100.0), 0.932, 5e-4);
  const auto fit = fit_power_law(exact_law(1.15, 0.047, {1e-4, 1e-2, 1, 1e2}));
  for (double c : {3e-5, 0.7, 123.0, 1e6}) {
    EXPECT_NEAR(predict_loss(fit, c) / (1.15 * std::pow(c, -0.047)), 1.0, 1e-9);
  }
}

TEST(FitPerLanguage, SharedExponentDifferentOffsets) {
  auto pts = exact_law(1.0, 0.05, {1, 10, 100}, "aa");
  const auto other = exact_law(1.2, 0.05, {2, 20, 200, 2000}, "bb");
  pts.insert(pts.end(), other.begin(), other.end());
  const auto fits = fit_per_language(pts, {{"aa", 60.0}, {"bb", 40.0}});
  ASSERT_EQ(fits.rows.size(), 2u);
  EXPECT_TRUE(fits.failures.empty());
  EXPECT_EQ(fits.rows[0].language, "aa");
  EXPECT_NEAR(fits.rows[0].fit.alpha_c, fits.rows[1].fit.alpha_c, 1e-9);
  EXPECT_NEAR(fits.rows[0].fit.c_m, 1.0, 1e-9);
  EXPECT_NEAR(fits.rows[1].fit.c_m, 1.2, 1e-9);
  EXPECT_EQ(fits.rows[1].proportion.value(), 40.0);
}

TEST(FitPerLanguage, DegenerateLanguageDoesNotStopOthers) {
  auto pts = exact_law(1.0, 0.05, {1, 10, 100}, "good");
  pts.push_back({5.0, 2.0, std::nullopt, "lonely"});
  const auto fits = fit_per_language(pts);
  ASSERT_EQ(fits.rows.size(), 1u);
  ASSERT_EQ(fits.failures.size(), 1u);
  EXPECT_EQ(fits.failures[0].language, "lonely");
}

TEST(FitPerLanguage, FrontierOnlyIgnoresDominatedRuns) {
  auto pts = exact_law(1.0, 0.05, {1, 10, 100}, "x");
  pts.push_back({50.0, 5.0, std::nullopt, "x"});  // far above the frontier
  EXPECT_NEAR(fit_per_language(pts).rows[0].fit.alpha_c, 0.05, 1e-12);
  FitOptions all;
  all.frontier_only = false;
  EXPECT_GT(std::abs(fit_per_language(pts, {}, all).rows[0].fit.alpha_c - 0.05), 0.01);
}

TEST(LanguageFits, ShippedTable) {
  const auto rows = load_language_fits(kData / "appendix_b_fits.csv");
  ASSERT_EQ(rows.size(), 26u);
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.fit.alpha_c);
    hi = std::max(hi, r.fit.alpha_c);
  }
  EXPECT_DOUBLE_EQ(lo, 0.030);
  EXPECT_DOUBLE_EQ(hi, 0.069);
}

TEST(ExponentDispersion, ShippedTable) {
  const auto rows = load_language_fits(kData / "appendix_b_fits.csv");
  const auto d = exponent_dispersion(rows, 1.0);
  EXPECT_EQ(d.n_rows, 10);
  EXPECT_NEAR(d.mean, 0.0521, 1e-4);
  EXPECT_NEAR(d.stddev, 0.003, 5e-4);
  EXPECT_LE(d.stddev, 0.004);

  const auto all = exponent_dispersion(rows, 0.0);
  EXPECT_EQ(all.n_rows, 26);
  EXPECT_GT(all.stddev, d.stddev);
}

TEST(ExponentDispersion, EdgeCases) {
  std::vector<LanguageFitRow> rows{{"a", 5.0, {1.0, 0.05, 0.0, 2}}};
  EXPECT_EQ(exponent_dispersion(rows, 1.0).stddev, 0.0);
  EXPECT_THROW(exponent_dispersion(rows, 10.0), EmptySelectionError);
}

TEST(Fixtures, EnglishFrontierExponent) {
  const auto pts = load_scaling_csv(kData / "english_frontier_runs.csv");
  const auto fits = fit_per_language(pts);
  ASSERT_EQ(fits.rows.size(), 1u);
  EXPECT_NEAR(fits.rows[0].fit.alpha_c, 0.046, 0.005);
}

TEST(Fixtures, MultilingualRunsReproduceFitTable) {
  const auto table = load_language_fits(kData / "appendix_b_fits.csv");
  std::map<std::string, double> proportions;
  for (const auto& r : table) proportions[r.language] = *r.proportion;
  const auto fits = fit_per_language(load_scaling_csv(kData / "multilingual_runs.csv"),
                                     proportions);
  ASSERT_EQ(fits.rows.size(), 26u);
  for (const auto& row : fits.rows) {
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const auto& t) { return t.language == row.language; });
    ASSERT_NE(it, table.end());
    EXPECT_NEAR(row.fit.alpha_c, it->fit.alpha_c, 0.005) << row.language;
  }
  const std::string csv = language_fits_csv(fits.rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "language,proportion,alpha_c,c_m,rss,n_points");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 27);
}

}  // namespace
}  // namespace budgetlab::scaling
