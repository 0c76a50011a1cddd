// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/LU>
#include <string>

#include "lipshape/error.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

void SaddlePointSystem::validate() const {
  const auto n = A.rows();
  require(A.cols() == n, ErrorKind::Contract, "saddle block A must be square");
  require(B.rows() == n, ErrorKind::Contract, "saddle block B has the wrong number of rows");
  require(B.cols() >= 1 && B.cols() <= 8, ErrorKind::Contract, "saddle system needs 1 <= m <= 8");
  require(r_u.size() == n && r_lambda.size() == B.cols(), ErrorKind::Contract,
          "saddle residuals have the wrong size");
}

Eigen::VectorXd schur_product(const InnerSolver& inner, const Eigen::MatrixXd& B,
                              const Eigen::VectorXd& w) {
  require(B.rows() == inner.size() && w.size() == B.cols(), ErrorKind::Contract,
          "schur product size mismatch");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(B.rows());
  for (Eigen::Index i = 0; i < B.cols(); ++i) b += B.col(i) * w[i];
  const Eigen::VectorXd z = inner.solve(b);
  Eigen::VectorXd out(B.cols());
  for (Eigen::Index i = 0; i < B.cols(); ++i) out[i] = -B.col(i).dot(z);
  return out;
}

SaddleSolution solve_saddle_direct(const SaddlePointSystem& sys, const InnerSolver& inner) {
  sys.validate();
  require(inner.size() == sys.A.rows(), ErrorKind::Contract, "inner solver does not match A");
  const long solves_before = inner.solves();
  const auto m = sys.B.cols();

  SaddleSolution out;
  if (sys.B.isZero(0.0)) {
    out.du = inner.solve(sys.r_u);
    out.dlambda = Eigen::VectorXd::Zero(m);
    out.inner_solves = inner.solves() - solves_before;
    return out;
  }

  Eigen::MatrixXd S(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    S.col(j) = schur_product(inner, sys.B, Eigen::VectorXd::Unit(m, j));
  }
  const Eigen::VectorXd w = inner.solve(sys.r_u);
  const Eigen::VectorXd rhs = sys.r_lambda - sys.B.transpose() * w;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  lu.setThreshold(1e-12);
  if (lu.rank() < m) {
    fail(ErrorKind::RankDeficient, "Schur complement has rank " + std::to_string(lu.rank()) +
                                       " < " + std::to_string(m) + "; constraints are redundant");
  }
  out.dlambda = lu.solve(rhs);
  out.du = inner.solve(sys.r_u - sys.B * out.dlambda);
  out.inner_solves = inner.solves() - solves_before;

  const double scale = std::max(1.0, sys.r_u.norm() + sys.r_lambda.norm());
  const double r1 = (sys.A * out.du + sys.B * out.dlambda - sys.r_u).norm();
  const double r2 = (sys.B.transpose() * out.du - sys.r_lambda).norm();
  out.residual = (r1 + r2) / scale;
  return out;
}

}  // namespace lipshape
