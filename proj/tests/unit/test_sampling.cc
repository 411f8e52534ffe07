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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "budgetlab/error.h"
#include "budgetlab/scaling/power_law.h"
#include "budgetlab/sampling/multilingual.h"

namespace budgetlab::sampling {
namespace {

const std::filesystem::path kData = BUDGETLAB_TEST_DATA_DIR;

std::vector<LanguageWeight> corpus_proportions() {
  std::vector<LanguageWeight> w;
  for (const auto& row : scaling::load_language_fits(kData / "appendix_b_fits.csv")) {
    w.push_back({row.language, *row.proportion});
  }
  return w;
}

double prob_of(const std::vector<LanguageShare>& shares, std::string_view language) {
  for (const auto& s : shares) {
    if (s.language == language) return s.sampled_prob;
  }
  ADD_FAILURE() << "missing " << language;
  return 0.0;
}

TEST(SamplingProbs, TwoLanguageExample) {
  const auto p = sampling_probs({{"A", 0.9}, {"B", 0.1}}, 0.3);
  EXPECT_NEAR(p[0].sampled_prob, 0.659, 1e-3);
  EXPECT_NEAR(p[1].sampled_prob, 0.341, 1e-3);
  const double oracle = std::pow(0.9, 0.3) / (std::pow(0.9, 0.3) + std::pow(0.1, 0.3));
  EXPECT_NEAR(p[0].sampled_prob, oracle, 1e-15);
}

TEST(SamplingProbs, IdentityAndUniformLimits) {
  const std::vector<LanguageWeight> w{{"a", 3.0}, {"b", 1.0}, {"c", 6.0}};
  const auto identity = sampling_probs(w, 1.0);
  EXPECT_EQ(identity[0].sampled_prob, 0.3);
  EXPECT_EQ(identity[1].sampled_prob, 0.1);
  EXPECT_EQ(identity[2].sampled_prob, 0.6);
  for (const auto& s : sampling_probs(w, 0.0)) EXPECT_EQ(s.sampled_prob, 1.0 / 3.0);
  for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
    for (const auto& s : sampling_probs({{"x", 5.0}, {"y", 5.0}}, alpha)) {
      EXPECT_DOUBLE_EQ(s.sampled_prob, 0.5);
    }
  }
}

TEST(SamplingProbs, CorpusProportionsFlattened) {
  const auto p = sampling_probs(corpus_proportions(), 0.3);
  EXPECT_LT(prob_of(p, "English"), 0.30);
  EXPECT_GT(prob_of(p, "Assamese"), 0.0001);
}

TEST(SamplingProbs, Errors) {
  EXPECT_THROW(sampling_probs({}, 0.3), DomainError);
  EXPECT_THROW(sampling_probs({{"a", 0.0}}, 0.3), DomainError);
  EXPECT_THROW(sampling_probs({{"a", 1.0}}, 1.5), DomainError);
  EXPECT_THROW(sampling_probs({{"a", 1.0}}, -0.1), DomainError);
  EXPECT_THROW(sampling_probs({{"a", 1.0}, {"a", 2.0}}, 0.3), DomainError);
}

TEST(SamplingProbs, RandomizedInvariants) {
  std::mt19937_64 rng(5);
  std::lognormal_distribution<double> size(0.0, 2.0);
  std::uniform_real_distribution<double> alpha_dist(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LanguageWeight> w;
    const int n = 2 + trial % 30;
    for (int i = 0; i < n; ++i) w.push_back({"l" + std::to_string(i), size(rng)});
    const double alpha = alpha_dist(rng);
    const auto p = sampling_probs(w, alpha);
    double sum = 0.0;
    double max_p = 0.0, min_p = 1.0, max_q = 0.0, min_q = 1.0;
    for (const auto& s : p) {
      sum += s.sampled_prob;
      max_p = std::max(max_p, s.sampled_prob);
      min_p = std::min(min_p, s.sampled_prob);
      max_q = std::max(max_q, s.natural_prop);
      min_q = std::min(min_q, s.natural_prop);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_LE(max_p, max_q + 1e-15);
    EXPECT_GE(min_p, min_q - 1e-15);
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (w[i].weight < w[j].weight) EXPECT_LE(p[i].sampled_prob, p[j].sampled_prob);
      }
    }
  }
}

TEST(UpsamplingRatio, Examples) {
  const auto r = upsampling_ratio({{"A", 0.9}, {"B", 0.1}}, 0.3);
  EXPECT_NEAR(r[0].ratio, 0.732, 1e-3);
  EXPECT_NEAR(r[1].ratio, 3.41, 1e-2);
  for (const auto& x : upsampling_ratio({{"A", 2.0}, {"B", 7.0}}, 1.0)) {
    EXPECT_NEAR(x.ratio, 1.0, 1e-15);
  }
  const std::vector<LanguageWeight> w{{"a", 1.0}, {"b", 3.0}, {"c", 6.0}};
  const auto u = upsampling_ratio(w, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_NEAR(u[i].ratio, 1.0 / (3.0 * w[i].weight / 10.0), 1e-12);
  }
}

TEST(AllocateTokens, Examples) {
  const auto shares = sampling_probs({{"A", 0.9}, {"B", 0.1}}, 0.3);
  const auto t = allocate_tokens(100, shares);
  EXPECT_EQ(t[0].tokens, 66);
  EXPECT_EQ(t[1].tokens, 34);

  const auto single = allocate_tokens(12345, sampling_probs({{"only", 2.0}}, 0.3));
  EXPECT_EQ(single[0].tokens, 12345);
}

TEST(AllocateTokens, CorpusProportionsAtAlphaOne) {
  // The published proportions sum to 97.44%, so normalizing gives English
  // 30 / 97.44 of the budget.
  auto w = corpus_proportions();
  const auto normalized = allocate_tokens(341'000'000'000, sampling_probs(w, 1.0));
  for (const auto& t : normalized) {
    if (t.language == "English") {
      EXPECT_NEAR(static_cast<double>(t.tokens), 341e9 * 30.0 / 97.44, 1.0);
    }
  }
  // With the unlisted 2.56% made explicit, English receives exactly 30%.
  w.push_back({"unlisted", 100.0 - 97.44});
  const auto full = allocate_tokens(341'000'000'000, sampling_probs(w, 1.0));
  for (const auto& t : full) {
    if (t.language == "English") EXPECT_NEAR(static_cast<double>(t.tokens), 102.3e9, 1.0);
  }
}

TEST(AllocateTokens, ConservesTotalsExactly) {
  std::mt19937_64 rng(9);
  std::lognormal_distribution<double> size(0.0, 3.0);
  std::uniform_int_distribution<std::int64_t> totals(1, 1'000'000'000'000);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LanguageWeight> w;
    const int n = 1 + trial % 40;
    for (int i = 0; i < n; ++i) w.push_back({"l" + std::to_string(i), size(rng)});
    const std::int64_t total = trial % 3 == 0 ? trial + 1 : totals(rng);
    const auto t = allocate_tokens(total, sampling_probs(w, 0.3));
    const std::int64_t sum = std::accumulate(
        t.begin(), t.end(), std::int64_t{0},
        [](std::int64_t acc, const LanguageTokens& x) { return acc + x.tokens; });
    EXPECT_EQ(sum, total);
    for (const auto& x : t) EXPECT_GE(x.tokens, 0);
  }
}

TEST(AllocateTokens, Errors) {
  const auto shares = sampling_probs({{"A", 1.0}}, 0.3);
  EXPECT_THROW(allocate_tokens(0, shares), DomainError);
  EXPECT_THROW(allocate_tokens(10, {}), DomainError);
  std::vector<LanguageShare> bad{{"A", 0.5, 0.5}, {"B", 0.5, 0.6}};
  EXPECT_THROW(allocate_tokens(10, bad), DomainError);
}

TEST(SampleCsv, HeaderAndDeterminism) {
  const auto shares = sampling_probs({{"A", 0.9}, {"B", 0.1}}, 0.3);
  const auto tokens = allocate_tokens(100, shares);
  const std::string csv = sample_csv(shares, tokens);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "language,natural_prop,sampled_prob,tokens");
  EXPECT_EQ(csv, sample_csv(shares, tokens));
  EXPECT_NE(csv.find("A,0.90000000000000002,"), std::string::npos);
}

}  // namespace
}  // namespace budgetlab::sampling
