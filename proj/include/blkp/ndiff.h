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

#ifndef BLKP_NDIFF_H_
#define BLKP_NDIFF_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "blkp/rng.h"

// Dense rank-2 tensors of doubles with reverse-mode differentiation. Each op
// allocates a node that remembers its inputs and how to push its output
// gradient back into them; Backward() walks that graph in reverse
// topological order.
namespace blkp::nd {

struct Node {
  int rows = 0;
  int cols = 0;
  std::vector<double> value;  // row-major
  std::vector<double> grad;   // empty until Backward touches the node
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;
};

class Tensor {
 public:
  Tensor() = default;

  static Tensor Constant(int rows, int cols, std::vector<double> values);
  static Tensor Parameter(int rows, int cols, std::vector<double> values);
  static Tensor Zeros(int rows, int cols);

  int rows() const { return node_->rows; }
  int cols() const { return node_->cols; }
  int size() const { return node_->rows * node_->cols; }
  bool requires_grad() const { return node_->requires_grad; }
  double at(int r, int c) const { return node_->value[r * node_->cols + c]; }
  double item() const;

  std::span<const double> value() const { return node_->value; }
  std::span<double> mutable_value() { return node_->value; }
  // Zero-filled when no gradient has been accumulated.
  std::span<const double> grad() const;
  void ZeroGrad();

  bool defined() const { return node_ != nullptr; }
  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& shared() const { return node_; }

  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<Node> node_;
};

// Affine map X * W + b with W of shape (in, out) and b of shape (1, out).
Tensor Affine(const Tensor& x, const Tensor& w, const Tensor& b);
Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double factor);

Tensor Relu(const Tensor& a);
Tensor LeakyRelu(const Tensor& a, double slope = 0.01);
Tensor Sigmoid(const Tensor& a);

// Column-wise concatenation of tensors with equal row counts.
Tensor ConcatCols(std::span<const Tensor> parts);

// Row layout helpers: RepeatRows([r0; r1], 2) = [r0; r0; r1; r1],
// TileRows([r0; r1], 2) = [r0; r1; r0; r1].
Tensor RepeatRows(const Tensor& a, int times);
Tensor TileRows(const Tensor& a, int times);

// Reductions over consecutive row groups of equal size: the result has
// rows() / group_size rows. Each group is one set of vectors. Sums run in
// row order. Max and min route the gradient to the first extreme row.
Tensor SegmentMean(const Tensor& a, int group_size);
Tensor SegmentMax(const Tensor& a, int group_size);
Tensor SegmentMin(const Tensor& a, int group_size);
Tensor SegmentStd(const Tensor& a, int group_size);  // population std

inline constexpr double kBceEpsilon = 1e-7;

// Sum of binary cross-entropy terms over all entries; predictions are
// clamped to [eps, 1 - eps] before the logarithm.
Tensor BceSum(const Tensor& predictions, std::span<const double> labels);
// BceSum divided by the number of entries.
Tensor BceLoss(const Tensor& predictions, std::span<const double> labels);

// Populates gradients of every reachable tensor that requires them.
// Parameter gradients accumulate across calls until ZeroGrad.
void Backward(const Tensor& loss);

enum class Activation { kIdentity, kRelu, kLeakyRelu, kSigmoid };

Tensor Apply(Activation act, const Tensor& a, double leaky_slope = 0.01);

// Fully connected network. Hidden layers share one activation; the last
// layer has its own.
class Mlp {
 public:
  struct Layer {
    Tensor weight;  // (in, out)
    Tensor bias;    // (1, out)
    Activation activation;
  };

  Mlp() = default;
  // Weights uniform in +-sqrt(1 / fan_in), biases zero.
  Mlp(std::span<const int> dims, Activation hidden, Activation output,
      Rng& rng, double leaky_slope = 0.01);

  Tensor Forward(const Tensor& x) const;

  int input_dim() const { return layers_.front().weight.rows(); }
  int output_dim() const { return layers_.back().weight.cols(); }
  std::vector<int> dims() const;
  double leaky_slope() const { return leaky_slope_; }

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Tensor> Parameters() const;

 private:
  std::vector<Layer> layers_;
  double leaky_slope_ = 0.01;
};

struct AdamConfig {
  double learning_rate = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-6;  // L2 term added to the gradient
};

// Adam with bias correction. The optimizer holds handles to the parameters
// and reads their accumulated gradients on each Step().
class Adam {
 public:
  Adam(std::vector<Tensor> params, const AdamConfig& config);

  void Step();
  void ZeroGrad();

  int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig config_;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
  int64_t step_ = 0;
};

}  // namespace blkp::nd

#endif  // BLKP_NDIFF_H_
