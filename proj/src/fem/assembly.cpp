// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/fem.hpp"

namespace lipshape {

namespace {

template <class Block>
void check_finite(const Block& local, int element) {
  if (!local.allFinite()) {
    fail(ErrorKind::Assembly, "non-finite local contribution on element " + std::to_string(element));
  }
}

}  // namespace

Assembler::Assembler(const DofMap& rows, const DofMap& cols) : rows_(rows), cols_(cols) {
  require(rows.num_elements() == cols.num_elements(), ErrorKind::Contract,
          "row and column dof maps cover different meshes");
  const int ne = rows.num_elements();
  std::vector<std::vector<int>> row_cols(rows.num_dofs);
  for (int t = 0; t < ne; ++t) {
    const auto rd = rows.element(t);
    const auto cd = cols.element(t);
    for (int i : rd) {
      require(i >= 0 && i < rows.num_dofs, ErrorKind::Assembly, "row dof out of range");
      for (int j : cd) {
        require(j >= 0 && j < cols.num_dofs, ErrorKind::Assembly, "column dof out of range");
        row_cols[i].push_back(j);
      }
    }
  }
  std::vector<int> offsets{0};
  std::vector<int> columns;
  for (auto& rc : row_cols) {
    std::sort(rc.begin(), rc.end());
    rc.erase(std::unique(rc.begin(), rc.end()), rc.end());
    columns.insert(columns.end(), rc.begin(), rc.end());
    offsets.push_back(static_cast<int>(columns.size()));
    rc.clear();
    rc.shrink_to_fit();
  }
  const std::size_t nnz = columns.size();
  pattern_ = SparseMatrix(rows.num_dofs, cols.num_dofs, std::move(offsets), std::move(columns),
                          std::vector<double>(nnz, 0.0));

  positions_.reserve(static_cast<std::size_t>(ne) * rows.per_element * cols.per_element);
  for (int t = 0; t < ne; ++t) {
    for (int i : rows.element(t)) {
      const auto c = pattern_.row_columns(i);
      const int base = pattern_.row_offsets()[i];
      for (int j : cols.element(t)) {
        positions_.push_back(base + static_cast<int>(std::lower_bound(c.begin(), c.end(), j) - c.begin()));
      }
    }
  }
}

SparseMatrix Assembler::assemble_matrix(const MatrixKernel& kernel) const {
  SparseMatrix m = pattern_;
  auto& values = m.values();
  Eigen::MatrixXd local(rows_.per_element, cols_.per_element);
  const int block = rows_.per_element * cols_.per_element;
  for (int t = 0; t < rows_.num_elements(); ++t) {
    local.setZero();
    kernel(t, local);
    check_finite(local, t);
    const int* pos = positions_.data() + static_cast<std::size_t>(t) * block;
    for (int a = 0; a < rows_.per_element; ++a) {
      for (int b = 0; b < cols_.per_element; ++b) values[*pos++] += local(a, b);
    }
  }
  return m;
}

Eigen::VectorXd Assembler::assemble_vector(const VectorKernel& kernel) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(rows_.num_dofs);
  Eigen::VectorXd local(rows_.per_element);
  for (int t = 0; t < rows_.num_elements(); ++t) {
    local.setZero();
    kernel(t, local);
    check_finite(local, t);
    const auto dofs = rows_.element(t);
    for (int a = 0; a < rows_.per_element; ++a) v[dofs[a]] += local[a];
  }
  return v;
}

void Assembler::assemble_system(const SystemKernel& kernel, SparseMatrix& matrix,
                                Eigen::VectorXd& vector) const {
  require(rows_.num_dofs == cols_.num_dofs && rows_.per_element == cols_.per_element,
          ErrorKind::Contract, "assemble_system needs a square dof layout");
  matrix = pattern_;
  vector = Eigen::VectorXd::Zero(rows_.num_dofs);
  auto& values = matrix.values();
  const int n = rows_.per_element;
  Eigen::MatrixXd local_m(n, n);
  Eigen::VectorXd local_v(n);
  for (int t = 0; t < rows_.num_elements(); ++t) {
    local_m.setZero();
    local_v.setZero();
    kernel(t, local_m, local_v);
    check_finite(local_m, t);
    check_finite(local_v, t);
    const int* pos = positions_.data() + static_cast<std::size_t>(t) * n * n;
    const auto dofs = rows_.element(t);
    for (int a = 0; a < n; ++a) {
      vector[dofs[a]] += local_v[a];
      for (int b = 0; b < n; ++b) values[*pos++] += local_m(a, b);
    }
  }
}

SparseMatrix assemble_operator(const DofMap& rows, const DofMap& cols, const MatrixKernel& kernel) {
  return Assembler(rows, cols).assemble_matrix(kernel);
}

Eigen::VectorXd assemble_functional(const DofMap& dofs, const VectorKernel& kernel) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dofs.num_dofs);
  Eigen::VectorXd local(dofs.per_element);
  for (int t = 0; t < dofs.num_elements(); ++t) {
    local.setZero();
    kernel(t, local);
    check_finite(local, t);
    const auto d = dofs.element(t);
    for (int a = 0; a < dofs.per_element; ++a) v[d[a]] += local[a];
  }
  return v;
}

void apply_dirichlet(SparseMatrix& matrix, Eigen::VectorXd& rhs, std::span<const int> dofs,
                     std::span<const double> values) {
  const int n = matrix.rows();
  require(matrix.cols() == n && rhs.size() == n, ErrorKind::Contract,
          "Dirichlet elimination needs a square system");
  require(dofs.size() == values.size(), ErrorKind::Contract, "Dirichlet dofs and values differ in length");

  std::vector<char> constrained(n, 0);
  Eigen::VectorXd known = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    const int d = dofs[k];
    require(d >= 0 && d < n, ErrorKind::Contract, "Dirichlet dof out of range");
    if (constrained[d]) {
      require(known[d] == values[k], ErrorKind::Contract,
              "dof " + std::to_string(d) + " prescribed with conflicting values");
      continue;
    }
    constrained[d] = 1;
    known[d] = values[k];
  }

  rhs -= matrix * known;
  auto& vals = matrix.values();
  const auto& offsets = matrix.row_offsets();
  const auto& cols = matrix.columns();
  for (int i = 0; i < n; ++i) {
    for (int k = offsets[i]; k < offsets[i + 1]; ++k) {
      if (constrained[i] || constrained[cols[k]]) vals[k] = (i == cols[k] && constrained[i]) ? 1.0 : 0.0;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!constrained[i]) continue;
    require(matrix.find(i, i) != nullptr, ErrorKind::Assembly,
            "constrained dof " + std::to_string(i) + " has no diagonal entry");
    rhs[i] = known[i];
  }
}

}  // namespace lipshape
