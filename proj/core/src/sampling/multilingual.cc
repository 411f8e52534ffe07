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

#include "budgetlab/sampling/multilingual.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "budgetlab/error.h"
#include "budgetlab/report/csv.h"

namespace budgetlab::sampling {
namespace {

void validate(const std::vector<LanguageWeight>& sizes, double alpha) {
  if (sizes.empty()) throw DomainError("sampling needs at least one language");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  std::set<std::string> seen;
  for (const auto& s : sizes) {
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
      throw DomainError("weight for '" + s.language + "' must be positive");
    }
    if (!seen.insert(s.language).second) {
      throw DomainError("duplicate language '" + s.language + "'");
    }
  }
}

}  // namespace

std::vector<LanguageShare> sampling_probs(const std::vector<LanguageWeight>& sizes,
                                          double alpha) {
  validate(sizes, alpha);
  double total = 0.0;
  for (const auto& s : sizes) total += s.weight;

  std::vector<LanguageShare> shares;
  shares.reserve(sizes.size());
  double norm = 0.0;
  for (const auto& s : sizes) {
    const double q = s.weight / total;
    const double tilted = alpha == 1.0 ? q : std::pow(q, alpha);
    shares.push_back(LanguageShare{s.language, q, tilted});
    norm += tilted;
  }
  for (auto& share : shares) share.sampled_prob /= norm;
  return shares;
}

std::vector<LanguageRatio> upsampling_ratio(const std::vector<LanguageWeight>& sizes,
                                            double alpha) {
  std::vector<LanguageRatio> ratios;
  for (const auto& share : sampling_probs(sizes, alpha)) {
    ratios.push_back(LanguageRatio{share.language, share.sampled_prob / share.natural_prop});
  }
  return ratios;
}

std::vector<LanguageTokens> allocate_tokens(std::int64_t total_tokens,
                                            const std::vector<LanguageShare>& probs) {
  if (total_tokens <= 0) throw DomainError("total_tokens must be positive");
  if (probs.empty()) throw DomainError("allocation needs at least one language");
  double sum = 0.0;
  for (const auto& p : probs) {
    if (!(p.sampled_prob >= 0.0)) throw DomainError("probabilities must be non-negative");
    sum += p.sampled_prob;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError(fmt::format("probabilities sum to {}, not 1", sum));
  }

  const auto total = static_cast<long double>(total_tokens);
  std::vector<LanguageTokens> out;
  std::vector<long double> remainders;
  std::int64_t assigned = 0;
  for (const auto& p : probs) {
    const long double quota = total * static_cast<long double>(p.sampled_prob / sum);
    const auto base = static_cast<std::int64_t>(std::floor(quota));
    out.push_back(LanguageTokens{p.language, base});
    remainders.push_back(quota - static_cast<long double>(base));
    assigned += base;
  }

  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  // Floors never exceed the total, and the shortfall is below the number of
  // languages.
  std::int64_t leftover = total_tokens - assigned;
  for (std::size_t i = 0; leftover > 0; i = (i + 1) % order.size(), --leftover) {
    ++out[order[i]].tokens;
  }
  return out;
}

std::vector<LanguageWeight> load_weights_csv(const std::filesystem::path& path) {
  const auto table = report::CsvTable::Load(path);
  table.require_header({"language", "weight"});
  std::vector<LanguageWeight> weights;
  for (const auto& row : table.rows()) {
    weights.push_back(
        LanguageWeight{row.fields[0], report::parse_double(row.fields[1], row.line)});
  }
  return weights;
}

std::string sample_csv(const std::vector<LanguageShare>& shares,
                       const std::vector<LanguageTokens>& tokens) {
  if (shares.size() != tokens.size()) throw ConfigError("shares and tokens differ in length");
  std::string out = "language,natural_prop,sampled_prob,tokens\n";
  for (std::size_t i = 0; i < shares.size(); ++i) {
    out += fmt::format("{},{},{},{}\n", report::csv_escape(shares[i].language),
                       report::format_exact(shares[i].natural_prop),
                       report::format_exact(shares[i].sampled_prob), tokens[i].tokens);
  }
  return out;
}

}  // namespace budgetlab::sampling
