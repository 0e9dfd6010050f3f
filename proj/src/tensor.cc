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

#include "semcodec/tensor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace semcodec {

size_t ShapeElements(const std::vector<size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1},
                         std::multiplies<size_t>());
}

std::string ShapeString(const std::vector<size_t>& shape) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

Tensor::Tensor(std::vector<size_t> shape, double fill)
    : shape_(std::move(shape)), data_(ShapeElements(shape_), fill) {}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != ShapeElements(shape_)) {
    throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                " does not match shape " + ShapeString(shape_));
  }
}

Tensor Tensor::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const size_t r = rows.size();
  const size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

Tensor Tensor::Vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

size_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  if (shape_.size() != 2) {
    throw std::logic_error("rows() on tensor of shape " + ShapeString(shape_));
  }
  return shape_[0];
}

size_t Tensor::cols() const {
  if (shape_.size() == 1) return shape_[0];
  if (shape_.size() != 2) {
    throw std::logic_error("cols() on tensor of shape " + ShapeString(shape_));
  }
  return shape_[1];
}

Tensor Tensor::Reshaped(std::vector<size_t> shape) const {
  return Tensor(std::move(shape), data_);
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool IsBinary(ElementwiseKind kind) {
  return kind == ElementwiseKind::kAdd || kind == ElementwiseKind::kSub ||
         kind == ElementwiseKind::kMul;
}

bool IsDifferentiable(ElementwiseKind kind) {
  return kind != ElementwiseKind::kSign && kind != ElementwiseKind::kRound;
}

namespace {

double ApplyUnary(ElementwiseKind kind, double v, double slope) {
  switch (kind) {
    case ElementwiseKind::kLeakyRelu:
      return v >= 0 ? v : slope * v;
    case ElementwiseKind::kRelu:
      return v > 0 ? v : 0.0;
    case ElementwiseKind::kExp:
      return std::exp(v);
    case ElementwiseKind::kLog:
      return std::log(v);
    case ElementwiseKind::kAbs:
      return std::abs(v);
    case ElementwiseKind::kSquare:
      return v * v;
    case ElementwiseKind::kSqrt:
      return std::sqrt(v);
    case ElementwiseKind::kSigmoid:
      return 1.0 / (1.0 + std::exp(-v));
    case ElementwiseKind::kTanh:
      return std::tanh(v);
    case ElementwiseKind::kSign:
      return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    case ElementwiseKind::kRound:
      return std::nearbyint(v);
    default:
      throw std::logic_error("not a unary elementwise kind");
  }
}

}  // namespace

Tensor Elementwise(ElementwiseKind kind, const Tensor& a, const Tensor* b,
                   double slope) {
  Tensor out(a.shape());
  if (IsBinary(kind)) {
    if (b == nullptr) throw std::invalid_argument("binary op needs two operands");
    if (a.shape() != b->shape()) {
      throw std::invalid_argument("shape mismatch: " + ShapeString(a.shape()) +
                                  " vs " + ShapeString(b->shape()));
    }
    for (size_t i = 0; i < a.size(); ++i) {
      switch (kind) {
        case ElementwiseKind::kAdd:
          out[i] = a[i] + (*b)[i];
          break;
        case ElementwiseKind::kSub:
          out[i] = a[i] - (*b)[i];
          break;
        default:
          out[i] = a[i] * (*b)[i];
          break;
      }
    }
    return out;
  }
  for (size_t i = 0; i < a.size(); ++i) out[i] = ApplyUnary(kind, a[i], slope);
  return out;
}

Tensor Add(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseKind::kAdd, a, &b);
}
Tensor Sub(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseKind::kSub, a, &b);
}
Tensor Mul(const Tensor& a, const Tensor& b) {
  return Elementwise(ElementwiseKind::kMul, a, &b);
}
Tensor LeakyRelu(const Tensor& a, double slope) {
  return Elementwise(ElementwiseKind::kLeakyRelu, a, nullptr, slope);
}

Tensor Scale(const Tensor& a, double s) {
  Tensor out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
    throw std::invalid_argument("matmul dimension mismatch: " + ShapeString(a.shape()) +
                                " x " + ShapeString(b.shape()));
  }
  const size_t r = a.rows(), k = a.cols(), c = b.cols();
  Tensor out = Tensor::Matrix(r, c);
  for (size_t i = 0; i < r; ++i) {
    double* orow = &out[i * c];
    for (size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      if (av == 0.0) continue;
      const double* brow = b.values().data() + p * c;
      for (size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
    }
  }
  return out;
}

Tensor Transpose(const Tensor& a) {
  const size_t r = a.rows(), c = a.cols();
  Tensor out = Tensor::Matrix(c, r);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) out[j * r + i] = a[i * c + j];
  return out;
}

Tensor Softmax(const Tensor& v) {
  if (v.size() == 0) throw std::invalid_argument("softmax of empty tensor");
  Tensor out = v;
  const size_t c = v.cols();
  const size_t r = v.size() / c;
  for (size_t i = 0; i < r; ++i) {
    double* row = &out[i * c];
    const double mx = *std::max_element(row, row + c);
    double total = 0.0;
    for (size_t j = 0; j < c; ++j) {
      row[j] = std::exp(row[j] - mx);
      total += row[j];
    }
    for (size_t j = 0; j < c; ++j) row[j] /= total;
  }
  return out;
}

double Sum(const Tensor& a) {
  return std::accumulate(a.values().begin(), a.values().end(), 0.0);
}

double Mean(const Tensor& a) { return a.size() ? Sum(a) / a.size() : 0.0; }

}  // namespace semcodec
