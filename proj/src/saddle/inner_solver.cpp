// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/IterativeLinearSolvers>
#include <atomic>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

struct InnerSolver::Impl {
  InnerMode mode;
  double tolerance;
  int n;
  SparseDirectSolver direct;
  Eigen::SparseMatrix<double> matrix;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  mutable std::atomic<long> solves{0};
  mutable std::atomic<long> iterations{0};
};

InnerSolver::InnerSolver(const SparseMatrix& matrix, InnerMode mode, double tolerance)
    : impl_(std::make_unique<Impl>()) {
  require(matrix.rows() == matrix.cols(), ErrorKind::Contract, "inner solver needs a square matrix");
  require(tolerance > 0.0, ErrorKind::Parameter, "inner solver tolerance must be positive");
  impl_->mode = mode;
  impl_->tolerance = tolerance;
  impl_->n = matrix.rows();
  if (mode == InnerMode::Direct) {
    impl_->direct.factorize(matrix);
  } else {
    impl_->matrix = matrix.to_eigen();
    impl_->cg.setTolerance(tolerance);
    impl_->cg.setMaxIterations(std::max(1000, 10 * impl_->n));
    impl_->cg.compute(impl_->matrix);
    if (impl_->cg.info() != Eigen::Success) fail(ErrorKind::Solver, "conjugate gradient setup failed");
  }
}

InnerSolver::~InnerSolver() = default;
InnerSolver::InnerSolver(InnerSolver&&) noexcept = default;
InnerSolver& InnerSolver::operator=(InnerSolver&&) noexcept = default;

Eigen::VectorXd InnerSolver::solve(const Eigen::VectorXd& rhs) const {
  require(rhs.size() == impl_->n, ErrorKind::Contract, "inner solve size mismatch");
  ++impl_->solves;
  if (impl_->mode == InnerMode::Direct) return impl_->direct.solve(rhs);

  const double bnorm = rhs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(impl_->n);
  Eigen::VectorXd z = impl_->cg.solve(rhs);
  impl_->iterations += impl_->cg.iterations();
  const double rel = (impl_->matrix * z - rhs).norm() / bnorm;
  if (!(rel <= 10.0 * impl_->tolerance)) {
    fail(ErrorKind::Solver, "conjugate gradients stopped at relative residual " + std::to_string(rel));
  }
  return z;
}

int InnerSolver::size() const { return impl_->n; }
InnerMode InnerSolver::mode() const { return impl_->mode; }
double InnerSolver::tolerance() const { return impl_->tolerance; }
long InnerSolver::solves() const { return impl_->solves; }
long InnerSolver::iterations() const { return impl_->iterations; }

InnerSolver build_inner_solver(const SparseMatrix& matrix, InnerMode mode, double tolerance) {
  return InnerSolver(matrix, mode, tolerance);
}

}  // namespace lipshape
