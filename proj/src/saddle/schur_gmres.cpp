// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "lipshape/error.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

SaddleSolution schur_gmres(const InnerSolver& inner, const Eigen::MatrixXd& B,
                           const Eigen::VectorXd& r_u, const Eigen::VectorXd& r_lambda,
                           const Eigen::VectorXd& y0, int max_iters, double tol,
                           GmresTrace* trace) {
  const auto m = B.cols();
  require(B.rows() == inner.size() && r_u.size() == B.rows() && r_lambda.size() == m &&
              y0.size() == m,
          ErrorKind::Contract, "schur_gmres size mismatch");
  require(max_iters >= 0 && tol > 0.0, ErrorKind::Parameter, "schur_gmres needs max_iters >= 0, tol > 0");
  const long solves_before = inner.solves();

  const Eigen::VectorXd w = inner.solve(r_u);
  const Eigen::VectorXd b = r_lambda - B.transpose() * w;
  const double bnorm = b.norm();

  // r = b - S y0 = b + B^T A^{-1} B y0
  Eigen::VectorXd r = b;
  if (!y0.isZero(0.0)) r += B.transpose() * inner.solve(B * y0);
  const int kmax = std::min<int>(max_iters, static_cast<int>(m));

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(m, kmax + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(kmax + 1, kmax);  // rotated in place
  Eigen::MatrixXd H_raw = Eigen::MatrixXd::Zero(kmax + 1, kmax);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(kmax + 1);
  std::vector<Givens> rot;
  std::vector<double> history;

  beta[0] = r.norm();
  history.push_back(beta[0]);
  const double target = tol * bnorm;
  int k = 0;
  bool breakdown = false;
  if (beta[0] > target && beta[0] > 0.0) {
    Q.col(0) = r / beta[0];
    for (int j = 0; j < kmax; ++j) {
      Eigen::VectorXd v = schur_product(inner, B, Q.col(j));
      const double vnorm = v.norm();
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd h = Q.leftCols(j + 1).transpose() * v;
        v -= Q.leftCols(j + 1) * h;
        H.col(j).head(j + 1) += h;
      }
      H(j + 1, j) = v.norm();
      H_raw.col(j) = H.col(j);
      breakdown = H(j + 1, j) <= 1e-14 * vnorm;
      if (!breakdown) Q.col(j + 1) = v / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        const double t = rot[i].c * H(i, j) + rot[i].s * H(i + 1, j);
        H(i + 1, j) = -rot[i].s * H(i, j) + rot[i].c * H(i + 1, j);
        H(i, j) = t;
      }
      const Givens g = givens(H(j, j), H(j + 1, j));
      rot.push_back(g);
      H(j, j) = g.r;
      H(j + 1, j) = 0.0;
      beta[j + 1] = -g.s * beta[j];
      beta[j] = g.c * beta[j];
      k = j + 1;
      history.push_back(std::abs(beta[j + 1]));
      if (breakdown || std::abs(beta[j + 1]) <= target) break;
    }
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(k);
  for (int i = k - 1; i >= 0; --i) {
    double sum = beta[i];
    for (int c = i + 1; c < k; ++c) sum -= H(i, c) * z[c];
    z[i] = sum / H(i, i);
  }

  SaddleSolution out;
  out.dlambda = y0 + Q.leftCols(k) * z;
  out.du = inner.solve(r_u - B * out.dlambda);
  out.iterations = k;
  out.residual = history.back();
  out.converged = breakdown || history.back() <= target;
  out.inner_solves = inner.solves() - solves_before;

  if (trace) {
    trace->basis = Q.leftCols(breakdown ? k : k + 1);
    trace->hessenberg = H_raw.topLeftCorner(k + 1, k);
    trace->residuals = history;
    trace->rotations = rot;
  }
  return out;
}

}  // namespace lipshape
