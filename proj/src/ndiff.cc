// Copyright 2026 The BLKP Authors
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

#include "blkp/ndiff.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "blkp/error.h"

namespace blkp::nd {

namespace {

using NodePtr = std::shared_ptr<Node>;

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kShapeMismatch, message);
}

NodePtr MakeNode(int rows, int cols, std::vector<NodePtr> parents) {
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value.assign(static_cast<size_t>(rows) * cols, 0.0);
  for (const NodePtr& p : parents) node->requires_grad |= p->requires_grad;
  if (node->requires_grad) node->parents = std::move(parents);
  return node;
}

// Applies fn(input, output_grad, index) style elementwise backward.
template <typename Forward, typename Derivative>
Tensor Elementwise(const Tensor& a, Forward forward, Derivative derivative) {
  NodePtr out = MakeNode(a.rows(), a.cols(), {a.shared()});
  const auto in = a.value();
  for (size_t k = 0; k < in.size(); ++k) out->value[k] = forward(in[k]);
  if (out->requires_grad) {
    out->backward = [derivative](Node& self) {
      Node& src = *self.parents[0];
      if (!src.requires_grad) return;
      for (size_t k = 0; k < self.grad.size(); ++k) {
        src.grad[k] += self.grad[k] * derivative(src.value[k], self.value[k]);
      }
    };
  }
  return Tensor(out);
}

enum class Extreme { kMax, kMin };

Tensor SegmentExtreme(const Tensor& a, int group_size, Extreme which) {
  Require(group_size > 0 && a.rows() % group_size == 0,
          "segment size must divide the row count");
  const int groups = a.rows() / group_size;
  const int cols = a.cols();
  NodePtr out = MakeNode(groups, cols, {a.shared()});
  auto arg = std::make_shared<std::vector<int>>(
      static_cast<size_t>(groups) * cols);
  const auto in = a.value();
  for (int g = 0; g < groups; ++g) {
    for (int c = 0; c < cols; ++c) {
      int best = g * group_size;
      for (int r = best + 1; r < (g + 1) * group_size; ++r) {
        const double v = in[r * cols + c];
        const double cur = in[best * cols + c];
        if (which == Extreme::kMax ? v > cur : v < cur) best = r;
      }
      (*arg)[g * cols + c] = best;
      out->value[g * cols + c] = in[best * cols + c];
    }
  }
  if (out->requires_grad) {
    out->backward = [arg, cols](Node& self) {
      Node& src = *self.parents[0];
      for (size_t k = 0; k < self.grad.size(); ++k) {
        src.grad[(*arg)[k] * cols + k % cols] += self.grad[k];
      }
    };
  }
  return Tensor(out);
}

}  // namespace

Tensor Tensor::Constant(int rows, int cols, std::vector<double> values) {
  Require(rows >= 0 && cols >= 0 &&
              values.size() == static_cast<size_t>(rows) * cols,
          "value count does not match shape");
  auto node = std::make_shared<Node>();
  node->rows = rows;
  node->cols = cols;
  node->value = std::move(values);
  return Tensor(node);
}

Tensor Tensor::Parameter(int rows, int cols, std::vector<double> values) {
  Tensor t = Constant(rows, cols, std::move(values));
  t.node_->requires_grad = true;
  t.node_->grad.assign(t.node_->value.size(), 0.0);
  return t;
}

Tensor Tensor::Zeros(int rows, int cols) {
  return Constant(rows, cols, std::vector<double>(
                                  static_cast<size_t>(rows) * cols, 0.0));
}

double Tensor::item() const {
  Require(size() == 1, "item() on a non-scalar tensor");
  return node_->value[0];
}

std::span<const double> Tensor::grad() const {
  if (node_->grad.size() != node_->value.size()) {
    node_->grad.assign(node_->value.size(), 0.0);
  }
  return node_->grad;
}

void Tensor::ZeroGrad() { node_->grad.assign(node_->value.size(), 0.0); }

Tensor Affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  Require(x.cols() == w.rows(), "affine: input width " +
                                    std::to_string(x.cols()) +
                                    " != weight rows " +
                                    std::to_string(w.rows()));
  Require(b.rows() == 1 && b.cols() == w.cols(), "affine: bias shape");
  const int n = x.rows(), in = w.rows(), outw = w.cols();
  NodePtr out = MakeNode(n, outw, {x.shared(), w.shared(), b.shared()});
  const auto xv = x.value();
  const auto wv = w.value();
  const auto bv = b.value();
  for (int r = 0; r < n; ++r) {
    double* o = out->value.data() + r * outw;
    std::copy(bv.begin(), bv.end(), o);
    for (int k = 0; k < in; ++k) {
      const double xk = xv[r * in + k];
      if (xk == 0.0) continue;
      const double* wr = wv.data() + k * outw;
      for (int c = 0; c < outw; ++c) o[c] += xk * wr[c];
    }
  }
  if (out->requires_grad) {
    out->backward = [n, in, outw](Node& self) {
      Node& xs = *self.parents[0];
      Node& ws = *self.parents[1];
      Node& bs = *self.parents[2];
      const double* g = self.grad.data();
      if (xs.requires_grad) {
        for (int r = 0; r < n; ++r) {
          for (int k = 0; k < in; ++k) {
            const double* wr = ws.value.data() + k * outw;
            double acc = 0.0;
            for (int c = 0; c < outw; ++c) acc += g[r * outw + c] * wr[c];
            xs.grad[r * in + k] += acc;
          }
        }
      }
      if (ws.requires_grad) {
        for (int r = 0; r < n; ++r) {
          for (int k = 0; k < in; ++k) {
            const double xk = xs.value[r * in + k];
            if (xk == 0.0) continue;
            double* wg = ws.grad.data() + k * outw;
            for (int c = 0; c < outw; ++c) wg[c] += xk * g[r * outw + c];
          }
        }
      }
      if (bs.requires_grad) {
        for (int r = 0; r < n; ++r) {
          for (int c = 0; c < outw; ++c) bs.grad[c] += g[r * outw + c];
        }
      }
    };
  }
  return Tensor(out);
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  return Affine(a, b, Tensor::Zeros(1, b.cols()));
}

Tensor Add(const Tensor& a, const Tensor& b) {
  Require(a.rows() == b.rows() && a.cols() == b.cols(), "add: shape");
  NodePtr out = MakeNode(a.rows(), a.cols(), {a.shared(), b.shared()});
  for (int k = 0; k < a.size(); ++k) {
    out->value[k] = a.value()[k] + b.value()[k];
  }
  if (out->requires_grad) {
    out->backward = [](Node& self) {
      for (int p = 0; p < 2; ++p) {
        Node& src = *self.parents[p];
        if (!src.requires_grad) continue;
        for (size_t k = 0; k < self.grad.size(); ++k) src.grad[k] += self.grad[k];
      }
    };
  }
  return Tensor(out);
}

Tensor Scale(const Tensor& a, double factor) {
  return Elementwise(
      a, [factor](double v) { return factor * v; },
      [factor](double, double) { return factor; });
}

Tensor Relu(const Tensor& a) {
  return Elementwise(
      a, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double in, double) { return in > 0.0 ? 1.0 : 0.0; });
}

Tensor LeakyRelu(const Tensor& a, double slope) {
  return Elementwise(
      a, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double in, double) { return in > 0.0 ? 1.0 : slope; });
}

Tensor Sigmoid(const Tensor& a) {
  return Elementwise(
      a,
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double out) { return out * (1.0 - out); });
}

Tensor Apply(Activation act, const Tensor& a, double leaky_slope) {
  switch (act) {
    case Activation::kIdentity:
      return a;
    case Activation::kRelu:
      return Relu(a);
    case Activation::kLeakyRelu:
      return LeakyRelu(a, leaky_slope);
    case Activation::kSigmoid:
      return Sigmoid(a);
  }
  return a;
}

Tensor ConcatCols(std::span<const Tensor> parts) {
  Require(!parts.empty(), "concat of nothing");
  const int rows = parts[0].rows();
  int cols = 0;
  std::vector<NodePtr> parents;
  std::vector<int> offsets;
  for (const Tensor& p : parts) {
    Require(p.rows() == rows, "concat: row counts differ");
    offsets.push_back(cols);
    cols += p.cols();
    parents.push_back(p.shared());
  }
  NodePtr out = MakeNode(rows, cols, parents);
  for (size_t p = 0; p < parts.size(); ++p) {
    const int pc = parts[p].cols();
    const auto pv = parts[p].value();
    for (int r = 0; r < rows; ++r) {
      std::copy(pv.begin() + r * pc, pv.begin() + (r + 1) * pc,
                out->value.begin() + r * cols + offsets[p]);
    }
  }
  if (out->requires_grad) {
    out->backward = [offsets, rows, cols](Node& self) {
      for (size_t p = 0; p < self.parents.size(); ++p) {
        Node& src = *self.parents[p];
        if (!src.requires_grad) continue;
        const int pc = src.cols;
        for (int r = 0; r < rows; ++r) {
          for (int c = 0; c < pc; ++c) {
            src.grad[r * pc + c] += self.grad[r * cols + offsets[p] + c];
          }
        }
      }
    };
  }
  return Tensor(out);
}

Tensor RepeatRows(const Tensor& a, int times) {
  Require(times > 0, "repeat count must be positive");
  const int cols = a.cols();
  NodePtr out = MakeNode(a.rows() * times, cols, {a.shared()});
  const auto in = a.value();
  for (int r = 0; r < a.rows() * times; ++r) {
    const int src = r / times;
    std::copy(in.begin() + src * cols, in.begin() + (src + 1) * cols,
              out->value.begin() + r * cols);
  }
  if (out->requires_grad) {
    out->backward = [times, cols](Node& self) {
      Node& src = *self.parents[0];
      for (int r = 0; r < self.rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          src.grad[(r / times) * cols + c] += self.grad[r * cols + c];
        }
      }
    };
  }
  return Tensor(out);
}

Tensor TileRows(const Tensor& a, int times) {
  Require(times > 0, "tile count must be positive");
  const int cols = a.cols();
  const int rows = a.rows();
  NodePtr out = MakeNode(rows * times, cols, {a.shared()});
  const auto in = a.value();
  for (int t = 0; t < times; ++t) {
    std::copy(in.begin(), in.end(),
              out->value.begin() + static_cast<size_t>(t) * rows * cols);
  }
  if (out->requires_grad) {
    out->backward = [rows, cols](Node& self) {
      Node& src = *self.parents[0];
      for (int r = 0; r < self.rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          src.grad[(r % rows) * cols + c] += self.grad[r * cols + c];
        }
      }
    };
  }
  return Tensor(out);
}

Tensor SegmentMean(const Tensor& a, int group_size) {
  Require(group_size > 0 && a.rows() % group_size == 0,
          "segment size must divide the row count");
  const int groups = a.rows() / group_size;
  const int cols = a.cols();
  NodePtr out = MakeNode(groups, cols, {a.shared()});
  const auto in = a.value();
  for (int g = 0; g < groups; ++g) {
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (int r = g * group_size; r < (g + 1) * group_size; ++r) {
        sum += in[r * cols + c];
      }
      out->value[g * cols + c] = sum / group_size;
    }
  }
  if (out->requires_grad) {
    out->backward = [group_size, cols](Node& self) {
      Node& src = *self.parents[0];
      for (int r = 0; r < src.rows; ++r) {
        const int g = r / group_size;
        for (int c = 0; c < cols; ++c) {
          src.grad[r * cols + c] += self.grad[g * cols + c] / group_size;
        }
      }
    };
  }
  return Tensor(out);
}

Tensor SegmentMax(const Tensor& a, int group_size) {
  return SegmentExtreme(a, group_size, Extreme::kMax);
}

Tensor SegmentMin(const Tensor& a, int group_size) {
  return SegmentExtreme(a, group_size, Extreme::kMin);
}

Tensor SegmentStd(const Tensor& a, int group_size) {
  Require(group_size > 0 && a.rows() % group_size == 0,
          "segment size must divide the row count");
  const int groups = a.rows() / group_size;
  const int cols = a.cols();
  NodePtr out = MakeNode(groups, cols, {a.shared()});
  auto means = std::make_shared<std::vector<double>>(
      static_cast<size_t>(groups) * cols);
  const auto in = a.value();
  for (int g = 0; g < groups; ++g) {
    for (int c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (int r = g * group_size; r < (g + 1) * group_size; ++r) {
        sum += in[r * cols + c];
      }
      const double mean = sum / group_size;
      double sq = 0.0;
      for (int r = g * group_size; r < (g + 1) * group_size; ++r) {
        const double d = in[r * cols + c] - mean;
        sq += d * d;
      }
      (*means)[g * cols + c] = mean;
      out->value[g * cols + c] = std::sqrt(sq / group_size);
    }
  }
  if (out->requires_grad) {
    out->backward = [means, group_size, cols](Node& self) {
      Node& src = *self.parents[0];
      for (int r = 0; r < src.rows; ++r) {
        const int g = r / group_size;
        for (int c = 0; c < cols; ++c) {
          const double sd = self.value[g * cols + c];
          if (sd == 0.0) continue;
          const double d = src.value[r * cols + c] - (*means)[g * cols + c];
          src.grad[r * cols + c] +=
              self.grad[g * cols + c] * d / (group_size * sd);
        }
      }
    };
  }
  return Tensor(out);
}

Tensor BceSum(const Tensor& predictions, std::span<const double> labels) {
  Require(static_cast<size_t>(predictions.size()) == labels.size(),
          "bce: " + std::to_string(predictions.size()) + " predictions vs " +
              std::to_string(labels.size()) + " labels");
  NodePtr out = MakeNode(1, 1, {predictions.shared()});
  const auto h = predictions.value();
  double total = 0.0;
  for (size_t k = 0; k < labels.size(); ++k) {
    const double p = std::clamp(h[k], kBceEpsilon, 1.0 - kBceEpsilon);
    total -= labels[k] * std::log(p) + (1.0 - labels[k]) * std::log(1.0 - p);
  }
  out->value[0] = total;
  if (out->requires_grad) {
    std::vector<double> y(labels.begin(), labels.end());
    out->backward = [y = std::move(y)](Node& self) {
      Node& src = *self.parents[0];
      const double g = self.grad[0];
      for (size_t k = 0; k < y.size(); ++k) {
        const double p = src.value[k];
        if (p < kBceEpsilon || p > 1.0 - kBceEpsilon) continue;
        src.grad[k] += g * (-y[k] / p + (1.0 - y[k]) / (1.0 - p));
      }
    };
  }
  return Tensor(out);
}

Tensor BceLoss(const Tensor& predictions, std::span<const double> labels) {
  Require(!labels.empty(), "bce of no entries");
  return Scale(BceSum(predictions, labels), 1.0 / labels.size());
}

void Backward(const Tensor& loss) {
  Require(loss.defined() && loss.size() == 1,
          "backward requires a scalar loss");
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, size_t>> stack{{loss.node(), 0}};
  seen.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) {
        stack.push_back({parent, 0});
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (Node* node : order) {
    const bool leaf = node->parents.empty();
    if (!leaf || node->grad.size() != node->value.size()) {
      node->grad.assign(node->value.size(), 0.0);
    }
  }
  loss.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

Mlp::Mlp(std::span<const int> dims, Activation hidden, Activation output,
         Rng& rng, double leaky_slope)
    : leaky_slope_(leaky_slope) {
  Require(dims.size() >= 2, "mlp needs at least input and output widths");
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l], out = dims[l + 1];
    Require(in > 0 && out > 0, "mlp widths must be positive");
    const double bound = std::sqrt(1.0 / in);
    std::vector<double> w(static_cast<size_t>(in) * out);
    for (double& v : w) v = rng.Uniform(-bound, bound);
    layers_.push_back({Tensor::Parameter(in, out, std::move(w)),
                       Tensor::Parameter(1, out, std::vector<double>(out, 0.0)),
                       l + 2 == dims.size() ? output : hidden});
  }
}

Tensor Mlp::Forward(const Tensor& x) const {
  Tensor h = x;
  for (const Layer& layer : layers_) {
    h = Apply(layer.activation, Affine(h, layer.weight, layer.bias),
              leaky_slope_);
  }
  return h;
}

std::vector<int> Mlp::dims() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(layers_.front().weight.rows());
  for (const Layer& layer : layers_) out.push_back(layer.weight.cols());
  return out;
}

std::vector<Tensor> Mlp::Parameters() const {
  std::vector<Tensor> params;
  for (const Layer& layer : layers_) {
    params.push_back(layer.weight);
    params.push_back(layer.bias);
  }
  return params;
}

Adam::Adam(std::vector<Tensor> params, const AdamConfig& config)
    : params_(std::move(params)), config_(config) {
  for (const Tensor& p : params_) {
    first_moment_.emplace_back(p.size(), 0.0);
    second_moment_.emplace_back(p.size(), 0.0);
  }
}

void Adam::Step() {
  ++step_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (size_t p = 0; p < params_.size(); ++p) {
    auto value = params_[p].mutable_value();
    const auto grad = params_[p].grad();
    Require(grad.size() == value.size(), "adam: gradient shape");
    auto& m = first_moment_[p];
    auto& v = second_moment_[p];
    for (size_t k = 0; k < value.size(); ++k) {
      const double g = grad[k] + config_.weight_decay * value[k];
      m[k] = config_.beta1 * m[k] + (1.0 - config_.beta1) * g;
      v[k] = config_.beta2 * v[k] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      value[k] -= config_.learning_rate * m_hat /
                  (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

void Adam::ZeroGrad() {
  for (Tensor& p : params_) p.ZeroGrad();
}

}  // namespace blkp::nd
