// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <span>
#include <vector>

namespace lipshape {

/// Compressed-row matrix with sorted, unique column indices per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols, std::vector<int> row_offsets, std::vector<int> columns,
               std::vector<double> values);

  /// Square identity, mostly for tests.
  static SparseMatrix identity(int n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const int> row_columns(int i) const {
    return {columns_.data() + row_offsets_[i], columns_.data() + row_offsets_[i + 1]};
  }
  std::span<const double> row_values(int i) const {
    return {values_.data() + row_offsets_[i], values_.data() + row_offsets_[i + 1]};
  }
  std::span<double> row_values(int i) {
    return {values_.data() + row_offsets_[i], values_.data() + row_offsets_[i + 1]};
  }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& columns() const { return columns_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Stored entry or 0 when (i, j) is outside the pattern.
  double coeff(int i, int j) const;
  /// Pointer to the stored entry, nullptr outside the pattern.
  double* find(int i, int j);

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transpose_times(const Eigen::VectorXd& x) const;

  double max_abs() const;
  /// max |A_ij - A_ji| over the pattern union.
  double symmetry_defect() const;

  bool symmetric() const { return symmetric_; }
  /// Sets the symmetry flag after checking |A - A^T|_max <= 1e-12 |A|_max.
  void mark_symmetric();
  void clear_symmetric() { symmetric_ = false; }

  Eigen::SparseMatrix<double> to_eigen() const;
  Eigen::MatrixXd to_dense() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// Sparse LU factorization (general, unsymmetric) with solves against the
/// matrix and its transpose.
class SparseDirectSolver {
 public:
  SparseDirectSolver();
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  /// Throws a Solver error if the matrix is singular.
  void factorize(const SparseMatrix& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& rhs) const;

  int size() const { return n_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_ = 0;
};

}  // namespace lipshape
