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

#include "budgetlab/kernel/functions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "budgetlab/error.h"

namespace budgetlab::kernel {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double swish(double x) { return x * sigmoid(x); }

double swish_derivative(double x) {
  const double s = sigmoid(x);
  return s + x * s * (1.0 - s);
}

namespace {

std::vector<double> power_of_two_slopes(std::int64_t n) {
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(n));
  for (std::int64_t h = 1; h <= n; ++h) {
    slopes.push_back(std::exp2(-8.0 * static_cast<double>(h) / static_cast<double>(n)));
  }
  return slopes;
}

std::vector<double> interpolated_slopes(std::int64_t n) {
  const std::int64_t closest = std::int64_t{1} << static_cast<int>(std::floor(std::log2(n)));
  if (closest == n) return power_of_two_slopes(n);
  auto slopes = power_of_two_slopes(closest);
  const auto doubled = interpolated_slopes(2 * closest);
  for (std::size_t i = 0; slopes.size() < static_cast<std::size_t>(n); i += 2) {
    slopes.push_back(doubled[i]);
  }
  return slopes;
}

}  // namespace

AlibiSlopes alibi_slopes(std::int64_t n_heads) {
  if (n_heads <= 0) throw ConfigError("alibi_slopes needs at least one head");
  return AlibiSlopes{interpolated_slopes(n_heads)};
}

std::vector<Tensor> alibi_bias(const AlibiSlopes& slopes, std::size_t q_len, std::size_t k_len) {
  if (q_len == 0 || k_len == 0 || q_len > k_len) {
    throw ConfigError("alibi_bias needs 1 <= q_len <= k_len");
  }
  const std::size_t offset = k_len - q_len;
  std::vector<Tensor> bias;
  bias.reserve(slopes.slopes.size());
  for (const double m : slopes.slopes) {
    Tensor b(q_len, k_len, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < q_len; ++i) {
      const std::size_t pos = offset + i;
      for (std::size_t j = 0; j <= pos; ++j) b(i, j) = -m * static_cast<double>(pos - j);
    }
    bias.push_back(std::move(b));
  }
  return bias;
}

Tensor rotary_apply_heads(const Tensor& x, std::int64_t n_heads, std::int64_t head_dim,
                          std::span<const std::int64_t> positions, double base, bool inverse) {
  if (head_dim % 2 != 0) throw ConfigError("rotary embeddings need an even head_dim");
  if (static_cast<std::size_t>(n_heads * head_dim) != x.cols()) {
    throw ConfigError("rotary_apply: n_heads * head_dim does not match the row width");
  }
  if (positions.size() != x.rows()) throw ConfigError("rotary_apply: one position per row");

  const auto half = static_cast<std::size_t>(head_dim / 2);
  std::vector<double> inv_freq(half);
  for (std::size_t i = 0; i < half; ++i) {
    inv_freq[i] = std::pow(base, -2.0 * static_cast<double>(i) / static_cast<double>(head_dim));
  }
  const double sign = inverse ? -1.0 : 1.0;

  Tensor out = x;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto pos = static_cast<double>(positions[r]);
    for (std::size_t i = 0; i < half; ++i) {
      const double angle = sign * pos * inv_freq[i];
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      for (std::int64_t h = 0; h < n_heads; ++h) {
        const std::size_t col = static_cast<std::size_t>(h * head_dim) + 2 * i;
        const double a = x(r, col);
        const double b = x(r, col + 1);
        out(r, col) = a * c - b * s;
        out(r, col + 1) = a * s + b * c;
      }
    }
  }
  return out;
}

Tensor rotary_apply(const Tensor& vectors, std::span<const std::int64_t> positions, double base) {
  return rotary_apply_heads(vectors, 1, static_cast<std::int64_t>(vectors.cols()), positions,
                            base);
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  const std::size_t n = x.cols();
  if (gain.size() != n || bias.size() != n) throw ConfigError("layer_norm parameter width");
  Tensor out(x.rows(), n);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += x(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t c = 0; c < n; ++c) var += (x(r, c) - mean) * (x(r, c) - mean);
    var /= static_cast<double>(n);
    const double inv = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) out(r, c) = (x(r, c) - mean) * inv * gain[c] + bias[c];
  }
  return out;
}

void softmax_rows(Tensor& logits) {
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    const double peak = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = std::isinf(v) && v < 0 ? 0.0 : std::exp(v - peak);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

}  // namespace budgetlab::kernel
