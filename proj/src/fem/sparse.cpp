// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <suitesparse/umfpack.h>
#include <algorithm>
#include <cmath>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/sparse.hpp"

namespace lipshape {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_offsets,
                           std::vector<int> columns, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      columns_(std::move(columns)),
      values_(std::move(values)) {
  require(rows >= 0 && cols >= 0, ErrorKind::Contract, "negative matrix dimension");
  require(row_offsets_.size() == static_cast<std::size_t>(rows) + 1, ErrorKind::Contract,
          "row offset array has the wrong length");
  require(row_offsets_.front() == 0 &&
              row_offsets_.back() == static_cast<int>(columns_.size()) &&
              columns_.size() == values_.size(),
          ErrorKind::Contract, "inconsistent compressed row arrays");
  for (int i = 0; i < rows; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      require(columns_[k] >= 0 && columns_[k] < cols, ErrorKind::Contract, "column index out of range");
      require(k == row_offsets_[i] || columns_[k - 1] < columns_[k], ErrorKind::Contract,
              "row " + std::to_string(i) + " has unsorted or duplicate columns");
    }
  }
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<int> offsets(n + 1);
  std::vector<int> cols(n);
  for (int i = 0; i <= n; ++i) offsets[i] = i;
  for (int i = 0; i < n; ++i) cols[i] = i;
  SparseMatrix m(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
  m.symmetric_ = true;
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense, double drop) {
  std::vector<int> offsets{0};
  std::vector<int> cols;
  std::vector<double> vals;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop || (i == j && dense(i, j) != 0.0)) {
        cols.push_back(static_cast<int>(j));
        vals.push_back(dense(i, j));
      }
    }
    offsets.push_back(static_cast<int>(cols.size()));
  }
  return SparseMatrix(static_cast<int>(dense.rows()), static_cast<int>(dense.cols()),
                      std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::coeff(int i, int j) const {
  const auto c = row_columns(i);
  auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + (it - c.begin())];
}

double* SparseMatrix::find(int i, int j) {
  const auto c = row_columns(i);
  auto it = std::lower_bound(c.begin(), c.end(), j);
  if (it == c.end() || *it != j) return nullptr;
  return &values_[row_offsets_[i] + (it - c.begin())];
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  require(x.size() == cols_, ErrorKind::Contract, "matrix-vector size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (int i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) sum += values_[k] * x[columns_[k]];
    y[i] = sum;
  }
  return y;
}

Eigen::VectorXd SparseMatrix::transpose_times(const Eigen::VectorXd& x) const {
  require(x.size() == rows_, ErrorKind::Contract, "transpose-vector size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) y[columns_[k]] += values_[k] * x[i];
  }
  return y;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::symmetry_defect() const {
  require(rows_ == cols_, ErrorKind::Contract, "symmetry of a non-square matrix");
  double defect = 0.0;
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      defect = std::max(defect, std::abs(values_[k] - coeff(columns_[k], i)));
    }
  }
  return defect;
}

void SparseMatrix::mark_symmetric() {
  const double defect = symmetry_defect();
  require(defect <= 1e-12 * std::max(1.0, max_abs()), ErrorKind::Contract,
          "matrix is not symmetric (defect " + std::to_string(defect) + ")");
  symmetric_ = true;
}

Eigen::SparseMatrix<double> SparseMatrix::to_eigen() const {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(rows_, cols_);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) triplets.emplace_back(i, columns_[k], values_[k]);
  }
  m.setFromTriplets(triplets.begin(), triplets.end());
  return Eigen::SparseMatrix<double>(m);
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) d(i, columns_[k]) = values_[k];
  }
  return d;
}

// ---------------------------------------------------------------------------

// UMFPACK works on compressed columns. The compressed rows of A are the
// compressed columns of A^T, so the stored factorization is that of A^T and
// the two solve directions are swapped.
struct SparseDirectSolver::Impl {
  std::vector<int> offsets;
  std::vector<int> indices;
  std::vector<double> values;
  void* numeric = nullptr;

  void release() {
    if (numeric) umfpack_di_free_numeric(&numeric);
    numeric = nullptr;
  }
  ~Impl() { release(); }

  Eigen::VectorXd solve(int system, const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x(rhs.size());
    double control[UMFPACK_CONTROL];
    umfpack_di_defaults(control);
    control[UMFPACK_IRSTEP] = 0;
    const int status = umfpack_di_solve(system, offsets.data(), indices.data(), values.data(),
                                        x.data(), rhs.data(), numeric, control, nullptr);
    if (status != UMFPACK_OK) fail(ErrorKind::Solver, "UMFPACK solve failed with status " + std::to_string(status));
    return x;
  }
};

SparseDirectSolver::SparseDirectSolver() : impl_(std::make_unique<Impl>()) {}
SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

void SparseDirectSolver::factorize(const SparseMatrix& matrix) {
  require(matrix.rows() == matrix.cols(), ErrorKind::Contract, "direct solver needs a square matrix");
  n_ = 0;
  impl_->release();
  impl_->offsets = matrix.row_offsets();
  impl_->indices = matrix.columns();
  impl_->values = matrix.values();
  const int n = matrix.rows();

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_di_defaults(control);
  // Flow and descent matrices have symmetric patterns.
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  void* symbolic = nullptr;
  int status = umfpack_di_symbolic(n, n, impl_->offsets.data(), impl_->indices.data(),
                                   impl_->values.data(), &symbolic, control, info);
  if (status != UMFPACK_OK) {
    fail(ErrorKind::Solver, "UMFPACK symbolic analysis failed with status " + std::to_string(status));
  }
  status = umfpack_di_numeric(impl_->offsets.data(), impl_->indices.data(), impl_->values.data(),
                              symbolic, &impl_->numeric, control, info);
  umfpack_di_free_symbolic(&symbolic);
  if (status != UMFPACK_OK) {
    impl_->release();
    fail(ErrorKind::Solver, status == UMFPACK_WARNING_singular_matrix
                                ? std::string("matrix is singular")
                                : "UMFPACK factorization failed with status " + std::to_string(status));
  }
  n_ = n;
}

Eigen::VectorXd SparseDirectSolver::solve(const Eigen::VectorXd& rhs) const {
  require(n_ > 0 && rhs.size() == n_, ErrorKind::Contract, "solve before factorize or size mismatch");
  return impl_->solve(UMFPACK_At, rhs);
}

Eigen::VectorXd SparseDirectSolver::solve_transpose(const Eigen::VectorXd& rhs) const {
  require(n_ > 0 && rhs.size() == n_, ErrorKind::Contract, "solve before factorize or size mismatch");
  return impl_->solve(UMFPACK_A, rhs);
}

}  // namespace lipshape
