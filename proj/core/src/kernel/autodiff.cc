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

#include "budgetlab/kernel/autodiff.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "budgetlab/error.h"
#include "budgetlab/kernel/attention.h"

namespace budgetlab::kernel {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("autodiff: ") + what);
}

void accumulate(Tensor& dst, const Tensor& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

// a^T * b without materializing the transpose.
Tensor matmul_tn(const Tensor& a, const Tensor& b) {
  Tensor out(a.cols(), b.cols());
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const double* brow = b.row(p).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double api = a(p, i);
      if (api == 0.0) continue;
      double* dst = out.row(i).data();
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += api * brow[j];
    }
  }
  return out;
}

}  // namespace

const Tensor& Var::value() const { return tape->value(id); }
const Tensor& Var::grad() const { return tape->grad(id); }

Var Tape::push(Tensor value, std::function<void(Tape&, std::size_t)> backward) {
  nodes_.push_back(Node{std::move(value), Tensor{}, std::move(backward)});
  return Var{this, nodes_.size() - 1};
}

Tensor& Tape::grad_ref(std::size_t id) {
  Node& node = nodes_[id];
  if (node.grad.empty() && !node.value.empty()) node.grad = Tensor(node.value.shape());
  return node.grad;
}

const Tensor& Tape::grad(std::size_t id) const {
  if (nodes_[id].grad.empty() && !nodes_[id].value.empty()) {
    throw Error("gradient requested before backward() reached node " + std::to_string(id));
  }
  return nodes_[id].grad;
}

Var Tape::leaf(Tensor value) { return push(std::move(value), nullptr); }

Var Tape::matmul(Var a, Var b) {
  return push(kernel::matmul(a.value(), b.value()), [a = a.id, b = b.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    accumulate(t.grad_ref(a), kernel::matmul_transposed(g, t.value(b)));
    accumulate(t.grad_ref(b), matmul_tn(t.value(a), g));
  });
}

Var Tape::matmul_transposed(Var a, Var b) {
  return push(kernel::matmul_transposed(a.value(), b.value()),
              [a = a.id, b = b.id](Tape& t, std::size_t self) {
                const Tensor& g = t.out_grad(self);
                accumulate(t.grad_ref(a), kernel::matmul(g, t.value(b)));
                accumulate(t.grad_ref(b), matmul_tn(g, t.value(a)));
              });
}

Var Tape::add(Var a, Var b) {
  require(a.value().same_shape(b.value()), "add needs equal shapes");
  Tensor out = a.value();
  accumulate(out, b.value());
  return push(std::move(out), [a = a.id, b = b.id](Tape& t, std::size_t self) {
    accumulate(t.grad_ref(a), t.out_grad(self));
    accumulate(t.grad_ref(b), t.out_grad(self));
  });
}

Var Tape::add_row(Var a, Var row) {
  const Tensor& x = a.value();
  require(row.value().size() == x.cols(), "add_row width");
  Tensor out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += row.value()[c];
  }
  return push(std::move(out), [a = a.id, row = row.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    accumulate(t.grad_ref(a), g);
    Tensor& gr = t.grad_ref(row);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < g.cols(); ++c) gr[c] += g(r, c);
    }
  });
}

Var Tape::mul(Var a, Var b) {
  require(a.value().same_shape(b.value()), "mul needs equal shapes");
  Tensor out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return push(std::move(out), [a = a.id, b = b.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    Tensor& ga = t.grad_ref(a);
    Tensor& gb = t.grad_ref(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * t.value(b)[i];
      gb[i] += g[i] * t.value(a)[i];
    }
  });
}

Var Tape::scale(Var a, double factor) {
  Tensor out = a.value();
  for (double& v : out.data()) v *= factor;
  return push(std::move(out), [a = a.id, factor](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var Tape::gelu(Var a) {
  Tensor out = a.value();
  for (double& v : out.data()) v = kernel::gelu(v);
  return push(std::move(out), [a = a.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * gelu_derivative(t.value(a)[i]);
  });
}

Var Tape::swish(Var a) {
  Tensor out = a.value();
  for (double& v : out.data()) v = kernel::swish(v);
  return push(std::move(out), [a = a.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * swish_derivative(t.value(a)[i]);
  });
}

Var Tape::softmax(Var a) {
  Tensor out = a.value();
  softmax_rows(out);
  return push(std::move(out), [a = a.id](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    const Tensor& p = t.value(self);
    Tensor& ga = t.grad_ref(a);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < p.cols(); ++c) dot += g(r, c) * p(r, c);
      for (std::size_t c = 0; c < p.cols(); ++c) ga(r, c) += p(r, c) * (g(r, c) - dot);
    }
  });
}

Var Tape::layer_norm(Var x, Var gain, Var bias, double eps) {
  const Tensor& in = x.value();
  const std::size_t n = in.cols();
  require(gain.value().size() == n && bias.value().size() == n, "layer_norm parameter width");
  Tensor xhat(in.rows(), n);
  std::vector<double> inv_std(in.rows());
  Tensor out(in.rows(), n);
  for (std::size_t r = 0; r < in.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += in(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t c = 0; c < n; ++c) var += (in(r, c) - mean) * (in(r, c) - mean);
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) {
      xhat(r, c) = (in(r, c) - mean) * inv_std[r];
      out(r, c) = xhat(r, c) * gain.value()[c] + bias.value()[c];
    }
  }
  return push(std::move(out), [x = x.id, gain = gain.id, bias = bias.id, xhat = std::move(xhat),
                               inv_std = std::move(inv_std)](Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    const Tensor& gamma = t.value(gain);
    Tensor& gx = t.grad_ref(x);
    Tensor& gg = t.grad_ref(gain);
    Tensor& gb = t.grad_ref(bias);
    const std::size_t n = g.cols();
    std::vector<double> dxhat(n);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      double mean_d = 0.0;
      double mean_dx = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        dxhat[c] = g(r, c) * gamma[c];
        mean_d += dxhat[c];
        mean_dx += dxhat[c] * xhat(r, c);
        gg[c] += g(r, c) * xhat(r, c);
        gb[c] += g(r, c);
      }
      mean_d /= static_cast<double>(n);
      mean_dx /= static_cast<double>(n);
      for (std::size_t c = 0; c < n; ++c) {
        gx(r, c) += inv_std[r] * (dxhat[c] - mean_d - xhat(r, c) * mean_dx);
      }
    }
  });
}

Var Tape::embedding(Var table, std::span<const std::int64_t> tokens) {
  const Tensor& tab = table.value();
  Tensor out(tokens.size(), tab.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] < 0 || static_cast<std::size_t>(tokens[i]) >= tab.rows()) {
      throw ValidationError("token id " + std::to_string(tokens[i]) + " outside vocabulary");
    }
    const auto src = tab.row(static_cast<std::size_t>(tokens[i]));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return push(std::move(out), [table = table.id, ids = std::vector<std::int64_t>(
                                                     tokens.begin(), tokens.end())](
                                  Tape& t, std::size_t self) {
    const Tensor& g = t.out_grad(self);
    Tensor& gt = t.grad_ref(table);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto dst = gt.row(static_cast<std::size_t>(ids[i]));
      const auto src = g.row(i);
      for (std::size_t c = 0; c < src.size(); ++c) dst[c] += src[c];
    }
  });
}

Var Tape::rotary(Var x, std::int64_t n_heads, std::int64_t head_dim,
                 std::span<const std::int64_t> positions, double base) {
  Tensor out = rotary_apply_heads(x.value(), n_heads, head_dim, positions, base);
  return push(std::move(out), [x = x.id, n_heads, head_dim, base,
                               pos = std::vector<std::int64_t>(positions.begin(),
                                                               positions.end())](
                                  Tape& t, std::size_t self) {
    // A rotation's adjoint is its inverse.
    accumulate(t.grad_ref(x),
               rotary_apply_heads(t.out_grad(self), n_heads, head_dim, pos, base, true));
  });
}

Var Tape::causal_attention(Var q, Var k, Var v, std::int64_t n_heads, std::int64_t head_dim,
                           const AlibiSlopes* slopes) {
  AttentionCore core =
      causal_attention_core(q.value(), k.value(), v.value(), n_heads, head_dim, slopes);
  return push(std::move(core.output), [q = q.id, k = k.id, v = v.id, n_heads, head_dim,
                                       probs = std::move(core.probs)](Tape& t,
                                                                      std::size_t self) {
    const Tensor& g = t.out_grad(self);
    const Tensor& qv = t.value(q);
    const Tensor& kv = t.value(k);
    const Tensor& vv = t.value(v);
    Tensor& gq = t.grad_ref(q);
    Tensor& gk = t.grad_ref(k);
    Tensor& gv = t.grad_ref(v);
    const std::size_t seq = g.rows();
    const auto hd = static_cast<std::size_t>(head_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(hd));
    std::vector<double> dp(seq);
    for (std::size_t h = 0; h < static_cast<std::size_t>(n_heads); ++h) {
      const std::size_t off = h * hd;
      const Tensor& p = probs[h];
      for (std::size_t i = 0; i < seq; ++i) {
        double rowdot = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
          double acc = 0.0;
          for (std::size_t c = 0; c < hd; ++c) acc += g(i, off + c) * vv(j, off + c);
          dp[j] = acc;
          rowdot += acc * p(i, j);
          for (std::size_t c = 0; c < hd; ++c) gv(j, off + c) += p(i, j) * g(i, off + c);
        }
        for (std::size_t j = 0; j <= i; ++j) {
          const double ds = p(i, j) * (dp[j] - rowdot) * scale;
          if (ds == 0.0) continue;
          for (std::size_t c = 0; c < hd; ++c) {
            gq(i, off + c) += ds * kv(j, off + c);
            gk(j, off + c) += ds * qv(i, off + c);
          }
        }
      }
    }
  });
}

Var Tape::cross_entropy(Var logits, std::span<const std::int64_t> targets,
                        std::span<const double> weights) {
  const Tensor& z = logits.value();
  require(targets.size() == z.rows(), "cross_entropy needs one target per row");
  require(weights.empty() || weights.size() == z.rows(), "cross_entropy weight count");
  std::vector<double> w(z.rows(), 1.0);
  if (!weights.empty()) w.assign(weights.begin(), weights.end());
  double total_w = 0.0;
  for (double x : w) total_w += x;
  require(total_w > 0.0, "cross_entropy weights sum to zero");

  Tensor probs = z;
  softmax_rows(probs);
  double loss = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    if (targets[r] < 0 || static_cast<std::size_t>(targets[r]) >= z.cols()) {
      throw ValidationError("target id outside vocabulary");
    }
    if (w[r] == 0.0) continue;
    // log-sum-exp form keeps the value exact even when the softmax underflows.
    double peak = z(r, 0);
    for (std::size_t c = 1; c < z.cols(); ++c) peak = std::max(peak, z(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < z.cols(); ++c) sum += std::exp(z(r, c) - peak);
    loss += w[r] * (peak + std::log(sum) - z(r, static_cast<std::size_t>(targets[r])));
  }
  Tensor out(1, 1, loss / total_w);
  return push(std::move(out), [logits = logits.id, probs = std::move(probs), w = std::move(w),
                               total_w,
                               tgt = std::vector<std::int64_t>(targets.begin(), targets.end())](
                                  Tape& t, std::size_t self) {
    const double g = t.out_grad(self)[0];
    Tensor& gz = t.grad_ref(logits);
    for (std::size_t r = 0; r < probs.rows(); ++r) {
      const double coef = g * w[r] / total_w;
      if (coef == 0.0) continue;
      for (std::size_t c = 0; c < probs.cols(); ++c) gz(r, c) += coef * probs(r, c);
      gz(r, static_cast<std::size_t>(tgt[r])) -= coef;
    }
  });
}

Var Tape::weighted_sum(Var a, const Tensor& weights) {
  require(a.value().same_shape(weights), "weighted_sum shape");
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += a.value()[i] * weights[i];
  return push(Tensor(1, 1, s), [a = a.id, weights](Tape& t, std::size_t self) {
    const double g = t.out_grad(self)[0];
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < weights.size(); ++i) ga[i] += g * weights[i];
  });
}

Var Tape::sum(Var a, Var b) {
  require(a.value().size() == 1 && b.value().size() == 1, "sum takes scalars");
  return push(Tensor(1, 1, a.value()[0] + b.value()[0]),
              [a = a.id, b = b.id](Tape& t, std::size_t self) {
                const double g = t.out_grad(self)[0];
                t.grad_ref(a)[0] += g;
                t.grad_ref(b)[0] += g;
              });
}

void Tape::backward(Var out) {
  require(out.tape == this, "variable belongs to another tape");
  require(out.value().size() == 1, "backward needs a scalar output");
  grad_ref(out.id)[0] += 1.0;
  for (std::size_t i = out.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.backward && !node.grad.empty()) node.backward(*this, i);
  }
  for (Node& node : nodes_) {
    if (node.grad.empty() && !node.value.empty()) node.grad = Tensor(node.value.shape());
  }
}

}  // namespace budgetlab::kernel
