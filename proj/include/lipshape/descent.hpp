// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "lipshape/fem.hpp"
#include "lipshape/mesh.hpp"
#include "lipshape/saddle.hpp"

namespace lipshape {

/// Barycenter residuals (x, y) followed by the volume residual.
using ConstraintValue = Eigen::Vector3d;
using Multipliers = Eigen::Vector3d;

/// Element data of the reference configuration and the constrained dofs of the
/// displacement space (P1 vector, interleaved). Built once per mesh geometry;
/// all descent integrals are evaluated in closed form on this data.
class DescentDiscretization {
 public:
  explicit DescentDiscretization(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  int num_dofs() const { return 2 * mesh_->num_nodes(); }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }
  const std::vector<char>& is_dirichlet() const { return is_dirichlet_; }
  const DofMap& dofs() const { return dofs_; }
  const Assembler& assembler() const { return assembler_; }

  struct Element {
    std::array<int, 3> nodes;
    double area;
    std::array<Eigen::Vector2d, 3> grad;  // physical P1 gradients
  };
  const std::vector<Element>& elements() const { return elements_; }

  /// Sets constrained entries to zero.
  void zero_dirichlet(Eigen::VectorXd& v) const;

 private:
  const Mesh* mesh_;
  std::vector<Element> elements_;
  std::vector<int> dirichlet_;
  std::vector<char> is_dirichlet_;
  DofMap dofs_;
  Assembler assembler_;
};

/// Elementwise state of the deformation F = id + u.
struct DeformedElement {
  Eigen::Matrix2d Du;
  double frob2 = 0.0;  // Du : Du
  double det = 0.0;    // det(I + Du)
  Eigen::Matrix2d inverse_transpose;
  Point centroid;      // centroid of the deformed element
  std::array<Eigen::Vector2d, 3> t;  // (I + Du)^{-T} grad phi_a
};

/// Throws SingularConfiguration if det(I + Du) <= 0.
DeformedElement deform_element(const DescentDiscretization::Element& e, const Mesh& mesh,
                               const Eigen::VectorXd& u);

/// True if det(I + Du) > 0 on every element.
bool is_admissible(const DescentDiscretization& disc, const Eigen::VectorXd& u);

ConstraintValue constraint_values(const DescentDiscretization& disc, const Eigen::VectorXd& u);
ConstraintValue constraint_values(const Mesh& mesh, const Eigen::VectorXd& u);

/// (1/p) int (Du:Du)^{p/2} + sigma G.u + lambda . g
double lagrangian(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                  const Multipliers& lambda, double p, double sigma, const Eigen::VectorXd& G);

struct Defect {
  Eigen::VectorXd r_u;       // minus the u-derivative of the Lagrangian, Dirichlet rows zero
  ConstraintValue r_lambda;  // minus the constraint values
};

Defect assemble_defect(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                       const Multipliers& lambda, double p, double sigma, const Eigen::VectorXd& G);

/// n x 3 dense columns: derivatives of the barycenter and volume residuals.
Eigen::MatrixXd assemble_constraint_jacobian(const DescentDiscretization& disc, const Eigen::VectorXd& u);

/// Regularized second derivative of the Lagrangian with Dirichlet rows and
/// columns eliminated (unit diagonal).
SparseMatrix assemble_hessian(const DescentDiscretization& disc, const Eigen::VectorXd& u,
                              const Multipliers& lambda, double p, double epsilon);

/// (int |u|^p)^{1/p} + (int (Du:Du)^{p/2})^{1/p}
double w1p_norm(const DescentDiscretization& disc, const Eigen::VectorXd& u, double p);
double w1p_norm(const Mesh& mesh, const Eigen::VectorXd& u, double p);

/// Coefficients f_k of det(I + t Dv) = sum_k t^k f_k, for d = 2 or 3.
std::vector<double> det_expansion_coeffs(const Eigen::MatrixXd& Dv);

struct NewtonOptions {
  double epsilon = 1e-8;     // Hessian regularization
  double tolerance = 1e-8;   // on |du|_{W1p} + |dlambda|
  int max_iterations = 50;
  int max_halvings = 10;
  InnerMode inner_mode = InnerMode::Direct;
  double inner_tolerance = 1e-12;
  bool use_gmres = false;
};

struct StageRecord {
  double p = 0.0;
  int newton_iterations = 0;
  long inner_solves = 0;
  long linear_iterations = 0;  // GMRES plus conjugate gradient iterations
  int halvings = 0;
  double last_update = 0.0;
};

struct DescentResult {
  Eigen::VectorXd u;
  Multipliers lambda = Multipliers::Zero();
  std::vector<StageRecord> stages;
};

/// Newton iteration for one exponent p starting from u0 with lambda = 0.
DescentResult newton_descent(const DescentDiscretization& disc, const Eigen::VectorXd& u0,
                             double sigma, const Eigen::VectorXd& G, double p,
                             const NewtonOptions& options);

/// p_init, p_init + p_inc, ... while below p_max, then exactly p_max.
std::vector<double> p_sequence(double p_init, double p_inc, double p_max);

/// Newton solves along p_sequence, each warm-started from the previous stage;
/// the first stage starts from u = 0.
DescentResult p_continuation(const DescentDiscretization& disc, double sigma,
                             const Eigen::VectorXd& G, double p_init, double p_inc,
                             double p_max, const NewtonOptions& options);

}  // namespace lipshape
