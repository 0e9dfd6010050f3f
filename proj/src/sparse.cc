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

#include "semcodec/sparse.h"

#include <stdexcept>

namespace semcodec {

void SparseMatrix::Push(size_t col, double value) {
  if (col >= cols_) throw std::out_of_range("sparse column out of range");
  pending_col_.push_back(col);
  pending_val_.push_back(value);
}

void SparseMatrix::EndRow() {
  if (row_ptr_.size() > rows_) throw std::logic_error("too many sparse rows");
  col_idx_.insert(col_idx_.end(), pending_col_.begin(), pending_col_.end());
  vals_.insert(vals_.end(), pending_val_.begin(), pending_val_.end());
  pending_col_.clear();
  pending_val_.clear();
  row_ptr_.push_back(col_idx_.size());
}

Tensor SparseMatrix::Apply(const Tensor& x) const {
  if (row_ptr_.size() != rows_ + 1) throw std::logic_error("sparse matrix incomplete");
  if (x.rows() != cols_) {
    throw std::invalid_argument("sparse apply: operand has " + std::to_string(x.rows()) +
                                " rows, expected " + std::to_string(cols_));
  }
  const size_t c = x.cols();
  Tensor out = Tensor::Matrix(rows_, c);
  for (size_t r = 0; r < rows_; ++r) {
    double* orow = &out[r * c];
    for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const double w = vals_[k];
      const double* xrow = x.values().data() + col_idx_[k] * c;
      for (size_t j = 0; j < c; ++j) orow[j] += w * xrow[j];
    }
  }
  return out;
}

Tensor SparseMatrix::ApplyTransposed(const Tensor& g) const {
  if (g.rows() != rows_) throw std::invalid_argument("sparse transpose apply: bad rows");
  const size_t c = g.cols();
  Tensor out = Tensor::Matrix(cols_, c);
  for (size_t r = 0; r < rows_; ++r) {
    const double* grow = g.values().data() + r * c;
    for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const double w = vals_[k];
      double* orow = &out[col_idx_[k] * c];
      for (size_t j = 0; j < c; ++j) orow[j] += w * grow[j];
    }
  }
  return out;
}

std::shared_ptr<const SparseMatrix> AveragePool2x2(size_t h, size_t w) {
  if (h % 2 || w % 2) throw std::invalid_argument("pooling needs even sizes");
  auto op = std::make_shared<SparseMatrix>((h / 2) * (w / 2), h * w);
  for (size_t y = 0; y < h / 2; ++y) {
    for (size_t x = 0; x < w / 2; ++x) {
      for (size_t dy = 0; dy < 2; ++dy)
        for (size_t dx = 0; dx < 2; ++dx) op->Push((2 * y + dy) * w + 2 * x + dx, 0.25);
      op->EndRow();
    }
  }
  return op;
}

namespace {

std::vector<size_t> BlockOrder(size_t h, size_t w, size_t block) {
  if (block == 0 || h % block || w % block) {
    throw std::invalid_argument("grid " + std::to_string(h) + "x" + std::to_string(w) +
                                " not divisible into blocks of " + std::to_string(block));
  }
  // order[k] = raster index of the k-th block-major row.
  std::vector<size_t> order;
  order.reserve(h * w);
  for (size_t u = 0; u < h / block; ++u)
    for (size_t v = 0; v < w / block; ++v)
      for (size_t dy = 0; dy < block; ++dy)
        for (size_t dx = 0; dx < block; ++dx)
          order.push_back((u * block + dy) * w + v * block + dx);
  return order;
}

}  // namespace

std::shared_ptr<const SparseMatrix> RasterToBlocks(size_t h, size_t w, size_t block) {
  const std::vector<size_t> order = BlockOrder(h, w, block);
  auto op = std::make_shared<SparseMatrix>(h * w, h * w);
  for (size_t k = 0; k < order.size(); ++k) {
    op->Push(order[k], 1.0);
    op->EndRow();
  }
  return op;
}

std::shared_ptr<const SparseMatrix> BlocksToRaster(size_t h, size_t w, size_t block) {
  const std::vector<size_t> order = BlockOrder(h, w, block);
  std::vector<size_t> inverse(order.size());
  for (size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  auto op = std::make_shared<SparseMatrix>(h * w, h * w);
  for (size_t p = 0; p < inverse.size(); ++p) {
    op->Push(inverse[p], 1.0);
    op->EndRow();
  }
  return op;
}

}  // namespace semcodec
