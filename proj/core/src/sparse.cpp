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

#include "chronalign/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chronalign/error.hpp"
#include "chronalign/parallel.hpp"

namespace chronalign {
namespace {

constexpr std::size_t kRowGrain = 256;

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Real> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw ContractViolation("dense matrix: " + std::to_string(values_.size()) +
                            " values for shape " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<Index> col_indices, std::vector<Real> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != col_indices_.size() || col_indices_.size() != values_.size()) {
    throw ContractViolation("sparse matrix: inconsistent CSR array lengths");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_offsets_[r] > row_offsets_[r + 1]) {
      throw ContractViolation("sparse matrix: row offsets decrease at row " + std::to_string(r));
    }
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
      if (col_indices_[k] >= cols_) {
        throw ContractViolation("sparse matrix: column index out of range in row " +
                                std::to_string(r));
      }
      if (k > row_offsets_[r] && col_indices_[k] <= col_indices_[k - 1]) {
        throw ContractViolation("sparse matrix: row " + std::to_string(r) +
                                " is not in canonical column order");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw ContractViolation("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                              ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  // Counting sort by row keeps the within-row insertion order, then each row
  // is sorted by column and coalesced.
  std::vector<std::size_t> offsets(rows + 1, 0);
  for (const auto& t : triplets) ++offsets[t.row + 1];
  for (std::size_t r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  std::vector<std::pair<Index, Real>> bucketed(triplets.size());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& t : triplets) bucketed[cursor[t.row]++] = {t.col, t.value};
  }
  triplets.clear();
  triplets.shrink_to_fit();

  std::vector<std::size_t> row_offsets(rows + 1, 0);
  std::vector<Index> col_indices;
  std::vector<Real> values;
  col_indices.reserve(bucketed.size());
  values.reserve(bucketed.size());
  for (std::size_t r = 0; r < rows; ++r) {
    auto first = bucketed.begin() + static_cast<std::ptrdiff_t>(offsets[r]);
    auto last = bucketed.begin() + static_cast<std::ptrdiff_t>(offsets[r + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last;) {
      const Index c = it->first;
      double sum = 0.0;
      for (; it != last && it->first == c; ++it) sum += it->second;
      col_indices.push_back(c);
      values.push_back(static_cast<Real>(sum));
    }
    row_offsets[r + 1] = col_indices.size();
  }
  return SparseMatrix(rows, cols, std::move(row_offsets), std::move(col_indices),
                      std::move(values));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<Index> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<Index>(i);
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<Real>(n, Real{1}));
}

Real SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols = row_cols(r);
  auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(c));
  if (it == cols.end() || *it != c) return Real{0};
  return values_[row_offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("spmm: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const std::size_t width = b.cols();
  DenseMatrix out(a.rows(), width);
  parallel_for(a.rows(), kRowGrain, [&](std::size_t begin, std::size_t end) {
    std::vector<double> acc(width);
    for (std::size_t r = begin; r < end; ++r) {
      const auto cols = a.row_cols(r);
      if (cols.empty()) continue;
      const auto vals = a.row_values(r);
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const double v = vals[k];
        const Real* src = b.row(cols[k]).data();
        for (std::size_t c = 0; c < width; ++c) acc[c] += v * static_cast<double>(src[c]);
      }
      Real* dst = out.row(r).data();
      for (std::size_t c = 0; c < width; ++c) dst[c] = static_cast<Real>(acc[c]);
    }
  });
  return out;
}

SparseMatrix row_normalize_l1(const SparseMatrix& a) {
  std::vector<Real> values(a.values().begin(), a.values().end());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const std::size_t begin = a.row_offsets()[r], end = a.row_offsets()[r + 1];
    double sum = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
      if (values[k] < 0) {
        throw ContractViolation("row_normalize_l1: negative value in row " + std::to_string(r));
      }
      sum += values[k];
    }
    if (sum <= 0.0) continue;
    for (std::size_t k = begin; k < end; ++k) {
      values[k] = static_cast<Real>(static_cast<double>(values[k]) / sum);
    }
  }
  return SparseMatrix(a.rows(), a.cols(),
                      std::vector<std::size_t>(a.row_offsets().begin(), a.row_offsets().end()),
                      std::vector<Index>(a.col_indices().begin(), a.col_indices().end()),
                      std::move(values));
}

DenseMatrix l2_normalize_rows(DenseMatrix b) {
  parallel_for(b.rows(), kRowGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto row = b.row(r);
      double sq = 0.0;
      for (Real v : row) sq += static_cast<double>(v) * v;
      const double norm = std::sqrt(sq);
      if (norm > kNormEpsilon) {
        for (Real& v : row) v = static_cast<Real>(v / norm);
      } else {
        std::fill(row.begin(), row.end(), Real{0});
      }
    }
  });
  return b;
}

SparseMatrix transpose(const SparseMatrix& a) {
  std::vector<std::size_t> offsets(a.cols() + 1, 0);
  for (Index c : a.col_indices()) ++offsets[c + 1];
  for (std::size_t c = 0; c < a.cols(); ++c) offsets[c + 1] += offsets[c];
  std::vector<Index> cols(a.nnz());
  std::vector<Real> values(a.nnz());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  // Visiting source rows in order yields increasing columns in the result.
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto rc = a.row_cols(r);
    const auto rv = a.row_values(r);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const std::size_t slot = cursor[rc[k]]++;
      cols[slot] = static_cast<Index>(r);
      values[slot] = rv[k];
    }
  }
  return SparseMatrix(a.cols(), a.rows(), std::move(offsets), std::move(cols), std::move(values));
}

}  // namespace chronalign
