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

#ifndef SEMCODEC_SPARSE_H_
#define SEMCODEC_SPARSE_H_

#include <cstddef>
#include <memory>
#include <vector>

#include "semcodec/tensor.h"

namespace semcodec {

// Fixed linear operator in CSR form. Used for pixel permutations, finite
// differences, pooling and upsampling, all of which act on the row index of
// a [pixels x channels] matrix.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), row_ptr_(1, 0) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  // Rows must be appended in order; entries of the current row follow.
  void Push(size_t col, double value);
  void EndRow();

  // [rows x c] = this * x, x is [cols x c].
  Tensor Apply(const Tensor& x) const;
  // [cols x c] = this^T * g, g is [rows x c].
  Tensor ApplyTransposed(const Tensor& g) const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<size_t> row_ptr_;
  std::vector<size_t> col_idx_;
  std::vector<double> vals_;
  std::vector<size_t> pending_col_;
  std::vector<double> pending_val_;
};

// 2x2 average pooling of an h x w raster ([h*w x c] rows).
std::shared_ptr<const SparseMatrix> AveragePool2x2(size_t h, size_t w);

// Permutation taking raster rows of an h x w grid to block-major rows:
// block (u, v) in raster order, then (dy, dx) inside the block. h and w
// must be multiples of `block`.
std::shared_ptr<const SparseMatrix> RasterToBlocks(size_t h, size_t w, size_t block);
// Inverse of RasterToBlocks.
std::shared_ptr<const SparseMatrix> BlocksToRaster(size_t h, size_t w, size_t block);

}  // namespace semcodec

#endif  // SEMCODEC_SPARSE_H_
