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

#ifndef SEMCODEC_TENSOR_H_
#define SEMCODEC_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace semcodec {

// Dense row-major tensor of doubles. Value type; copies are deep.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, double fill = 0.0);
  Tensor(std::vector<size_t> shape, std::vector<double> data);

  static Tensor Matrix(size_t rows, size_t cols, double fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }
  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Vector(std::initializer_list<double> values);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_.at(i); }
  size_t size() const { return data_.size(); }

  // 2-D views; a rank-1 tensor is treated as a single row.
  size_t rows() const;
  size_t cols() const;

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  double& at(size_t r, size_t c) { return data_[r * cols() + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols() + c]; }
  double& at(size_t c, size_t y, size_t x) {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }
  double at(size_t c, size_t y, size_t x) const {
    return data_[(c * shape_[1] + y) * shape_[2] + x];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  // Same data, new shape; element count must match.
  Tensor Reshaped(std::vector<size_t> shape) const;

  bool AllFinite() const;
  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> data_;
};

std::string ShapeString(const std::vector<size_t>& shape);
size_t ShapeElements(const std::vector<size_t>& shape);

enum class ElementwiseKind {
  kAdd,
  kSub,
  kMul,
  kLeakyRelu,
  kRelu,
  kExp,
  kLog,
  kAbs,
  kSquare,
  kSqrt,
  kSigmoid,
  kTanh,
  // Piecewise constant; valid on tensors but rejected by Graph.
  kSign,
  kRound,
};

bool IsDifferentiable(ElementwiseKind kind);

bool IsBinary(ElementwiseKind kind);

// Applies `kind` entrywise. Binary kinds need `b` with an identical shape;
// unary kinds ignore it. `slope` is only read by kLeakyRelu.
Tensor Elementwise(ElementwiseKind kind, const Tensor& a, const Tensor* b = nullptr,
                   double slope = 0.2);

Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double s);
Tensor LeakyRelu(const Tensor& a, double slope = 0.2);

Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);

// Softmax over a vector (or over each row of a matrix).
Tensor Softmax(const Tensor& v);

double Sum(const Tensor& a);
double Mean(const Tensor& a);

}  // namespace semcodec

#endif  // SEMCODEC_TENSOR_H_
