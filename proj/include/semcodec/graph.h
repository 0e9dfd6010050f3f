// Copyright 2026 The Semcodec Authors.
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

#ifndef SEMCODEC_GRAPH_H_
#define SEMCODEC_GRAPH_H_

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semcodec/param_block.h"
#include "semcodec/sparse.h"
#include "semcodec/tensor.h"

namespace semcodec {

class UnsupportedOpError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Handle to a node of a Graph.
struct Var {
  int id = -1;
};

// Tape-based reverse-mode differentiation over 2-D tensors. Nodes are
// evaluated eagerly when created; Backward() walks the tape in reverse.
// Matrices are [rows x cols]; a "row vector" is [1 x cols].
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Constant(Tensor value);
  // Leaf bound to block.value(name); Backward() accumulates into block.grad.
  Var Param(ParamBlock& block, const std::string& name);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  double scalar(Var v) const;
  // Gradient of the last Backward() target with respect to `v`.
  const Tensor& grad(Var v) const;

  Var Elementwise(ElementwiseKind kind, Var a, Var b);
  Var Elementwise(ElementwiseKind kind, Var a, double slope = 0.2);

  Var Add(Var a, Var b) { return Elementwise(ElementwiseKind::kAdd, a, b); }
  Var Sub(Var a, Var b) { return Elementwise(ElementwiseKind::kSub, a, b); }
  Var Mul(Var a, Var b) { return Elementwise(ElementwiseKind::kMul, a, b); }
  Var LeakyRelu(Var a, double slope = 0.2) {
    return Elementwise(ElementwiseKind::kLeakyRelu, a, slope);
  }
  Var Relu(Var a) { return Elementwise(ElementwiseKind::kRelu, a); }
  Var Sigmoid(Var a) { return Elementwise(ElementwiseKind::kSigmoid, a); }
  Var Square(Var a) { return Elementwise(ElementwiseKind::kSquare, a); }
  Var Abs(Var a) { return Elementwise(ElementwiseKind::kAbs, a); }
  Var Log(Var a) { return Elementwise(ElementwiseKind::kLog, a); }
  Var Sqrt(Var a) { return Elementwise(ElementwiseKind::kSqrt, a); }

  Var Scale(Var a, double s);
  Var AddScalar(Var a, double s);

  Var MatMul(Var a, Var b);
  // [1 x c] -> [rows x c].
  Var BroadcastRows(Var row, size_t rows);
  // [r x 1] -> [r x cols].
  Var BroadcastCols(Var col, size_t cols);
  // a [r x c] + row [1 x c].
  Var AddRow(Var a, Var row) { return Add(a, BroadcastRows(row, value(a).rows())); }

  // Row-wise softmax / log-softmax.
  Var Softmax(Var a);
  Var LogSoftmax(Var a);

  // Reductions. Sum/Mean produce [1 x 1].
  Var Sum(Var a);
  Var Mean(Var a);
  Var ColMean(Var a);
  Var ColMax(Var a);
  Var Element(Var a, size_t index);

  Var Reshape(Var a, std::vector<size_t> shape);
  Var ConcatCols(std::span<const Var> parts);
  Var Apply(std::shared_ptr<const SparseMatrix> op, Var x);

  // Custom pointwise map with caller-supplied forward value and derivative
  // d value / d a (used for quantization with a surrogate gradient).
  Var Pointwise(Var a, Tensor value, Tensor derivative);

  // Seeds d target/d target = 1 and propagates. `target` must hold one value.
  void Backward(Var target);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<int> inputs;
    std::function<void(Graph&, int)> backward;
    ParamBlock* block = nullptr;
    size_t param_index = 0;
    bool needs_grad = false;
  };

  Var Push(Tensor value, std::vector<int> inputs,
           std::function<void(Graph&, int)> backward);
  Tensor& GradSlot(int id);
  const Tensor& OutGrad(int id) const { return nodes_[id].grad; }
  bool NeedsGrad(int id) const { return nodes_[id].needs_grad; }

  std::vector<Node> nodes_;
};

// Binds a ParamBlock into graphs: a mutable block yields trainable leaves,
// a const block yields constants.
class ParamRef {
 public:
  ParamRef(ParamBlock& block) : mutable_(&block), block_(&block) {}  // NOLINT
  ParamRef(const ParamBlock& block) : block_(&block) {}              // NOLINT

  Var operator()(Graph& g, const std::string& name) const {
    return mutable_ ? g.Param(*mutable_, name) : g.Constant(block_->value(name));
  }
  const ParamBlock& block() const { return *block_; }
  bool trainable() const { return mutable_ != nullptr; }

 private:
  ParamBlock* mutable_ = nullptr;
  const ParamBlock* block_;
};

}  // namespace semcodec

#endif  // SEMCODEC_GRAPH_H_
