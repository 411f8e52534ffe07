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

#ifndef BUDGETLAB_SAMPLING_MULTILINGUAL_H_
#define BUDGETLAB_SAMPLING_MULTILINGUAL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace budgetlab::sampling {

// Language weights keep insertion order; tags must be unique.
struct LanguageWeight {
  std::string language;
  double weight = 0.0;
};

struct LanguageShare {
  std::string language;
  double natural_prop = 0.0;  // q_l, normalized input weight
  double sampled_prob = 0.0;  // p_l
};

inline constexpr double kDefaultAlpha = 0.3;

// p_l = q_l^alpha / sum_m q_m^alpha. alpha = 1 keeps the natural mix,
// alpha = 0 is uniform. Throws DomainError on an empty list, non-positive
// weight, duplicate tag or alpha outside [0, 1].
std::vector<LanguageShare> sampling_probs(const std::vector<LanguageWeight>& sizes,
                                          double alpha = kDefaultAlpha);

struct LanguageRatio {
  std::string language;
  double ratio = 0.0;  // p_l / q_l
};

std::vector<LanguageRatio> upsampling_ratio(const std::vector<LanguageWeight>& sizes,
                                            double alpha = kDefaultAlpha);

struct LanguageTokens {
  std::string language;
  std::int64_t tokens = 0;
};

// Largest-remainder (Hamilton) apportionment; the result sums to total_tokens
// exactly. Remainder ties go to the earlier language.
std::vector<LanguageTokens> allocate_tokens(std::int64_t total_tokens,
                                            const std::vector<LanguageShare>& probs);

// `language,weight`
std::vector<LanguageWeight> load_weights_csv(const std::filesystem::path& path);
// `language,natural_prop,sampled_prob,tokens`
std::string sample_csv(const std::vector<LanguageShare>& shares,
                       const std::vector<LanguageTokens>& tokens);

}  // namespace budgetlab::sampling

#endif  // BUDGETLAB_SAMPLING_MULTILINGUAL_H_
