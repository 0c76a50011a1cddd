// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "lipshape/sparse.hpp"

namespace lipshape {

struct Givens {
  double c = 1.0;
  double s = 0.0;
  double r = 0.0;
};

/// Rotation with c*a + s*b = r = hypot(a, b) and -s*a + c*b = 0.
Givens givens(double a, double b);

enum class InnerMode { Direct, Iterative };

/// Solves A z = b for one fixed matrix. Direct mode factorizes once; iterative
/// mode runs preconditioned conjugate gradients to a relative tolerance.
class InnerSolver {
 public:
  InnerSolver(const SparseMatrix& matrix, InnerMode mode, double tolerance = 1e-12);
  ~InnerSolver();
  InnerSolver(InnerSolver&&) noexcept;
  InnerSolver& operator=(InnerSolver&&) noexcept;

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  int size() const;
  InnerMode mode() const;
  double tolerance() const;
  /// Number of solve() calls so far.
  long solves() const;
  /// Total conjugate gradient iterations (iterative mode).
  long iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

InnerSolver build_inner_solver(const SparseMatrix& matrix, InnerMode mode, double tolerance = 1e-12);

/// Newton system [A B; B^T 0] [du; dlambda] = [r_u; r_lambda].
struct SaddlePointSystem {
  SparseMatrix A;     // n x n, symmetric
  Eigen::MatrixXd B;  // n x m, dense columns
  Eigen::VectorXd r_u;
  Eigen::VectorXd r_lambda;

  /// Throws a Contract error on inconsistent dimensions or m > 8.
  void validate() const;
};

struct SaddleSolution {
  Eigen::VectorXd du;
  Eigen::VectorXd dlambda;
  int iterations = 0;      // GMRES iterations (0 for the direct path)
  long inner_solves = 0;   // solves with A
  double residual = 0.0;   // final Schur residual (GMRES) or relative KKT residual (direct)
  bool converged = true;
};

/// S w with S = -B^T A^{-1} B.
Eigen::VectorXd schur_product(const InnerSolver& inner, const Eigen::MatrixXd& B,
                              const Eigen::VectorXd& w);

/// Forms S column by column and solves the dense m x m system; m + 2 inner
/// solves in total. Throws RankDeficient if S is singular.
SaddleSolution solve_saddle_direct(const SaddlePointSystem& system, const InnerSolver& inner);

/// Arnoldi vectors, Hessenberg matrix before rotation and residual history of
/// one schur_gmres call.
struct GmresTrace {
  Eigen::MatrixXd basis;       // m x (k + 1), or m x k after a breakdown
  Eigen::MatrixXd hessenberg;  // (k + 1) x k
  std::vector<double> residuals;  // |beta| before the first and after each iteration
  std::vector<Givens> rotations;
};

/// GMRES on the Schur complement system S dlambda = r_lambda - B^T A^{-1} r_u
/// with two-pass classical Gram-Schmidt. Stops when |beta| <= tol * |rhs|; an
/// unconverged result carries converged = false.
SaddleSolution schur_gmres(const InnerSolver& inner, const Eigen::MatrixXd& B,
                           const Eigen::VectorXd& r_u, const Eigen::VectorXd& r_lambda,
                           const Eigen::VectorXd& y0, int max_iters, double tol,
                           GmresTrace* trace = nullptr);

}  // namespace lipshape
