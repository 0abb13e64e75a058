// Copyright 2026 The chronalign Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chronalign {

using Real = float;
using Index = std::uint32_t;

struct Triplet {
  Index row = 0;
  Index col = 0;
  Real value = 0;
};

// Row-major dense matrix. Houses per-node label vectors.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, Real{0}) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Real> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Real& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  Real operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<Real> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const Real> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<Real> values() { return values_; }
  std::span<const Real> values() const { return values_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> values_;
};

// Compressed sparse row matrix in canonical form: column indices strictly
// increasing within each row.
class SparseMatrix {
 public:
  SparseMatrix() : row_offsets_(1, 0) {}
  // Zero matrix of the given shape.
  SparseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of CSR arrays; throws ContractViolation unless canonical.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<Index> col_indices, std::vector<Real> values);

  // Duplicate (row, col) entries are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_indices_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const Real> values() const { return values_; }

  std::span<const Index> row_cols(std::size_t r) const {
    return {col_indices_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }
  std::span<const Real> row_values(std::size_t r) const {
    return {values_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }

  // Value at (r, c), zero when not stored.
  Real at(std::size_t r, std::size_t c) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<Real> values_;
};

// a * b with per-row double accumulation. Rows are processed in parallel;
// the result does not depend on the thread count.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b);

// Scales every nonempty row to sum 1. Values must be non-negative.
SparseMatrix row_normalize_l1(const SparseMatrix& a);

inline constexpr double kNormEpsilon = 1e-12;

// Scales rows with norm > kNormEpsilon to unit L2 norm; zeroes the rest.
DenseMatrix l2_normalize_rows(DenseMatrix b);

SparseMatrix transpose(const SparseMatrix& a);

}  // namespace chronalign
