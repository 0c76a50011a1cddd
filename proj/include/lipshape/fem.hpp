// Copyright 2026 The lipshape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "lipshape/mesh.hpp"
#include "lipshape/sparse.hpp"

namespace lipshape {

// ---------------------------------------------------------------------------
// Reference-to-physical map x = x0 + DF (xi, eta).

struct ElementGeometry {
  Eigen::Matrix2d jacobian;           // DF_K, columns x1 - x0 and x2 - x0
  double det = 0.0;                   // 2 * area
  Eigen::Matrix2d inverse_transpose;  // DF_K^{-T}
};

/// Throws a Degenerate error for collinear or clockwise corners.
ElementGeometry element_geometry(const std::array<Point, 3>& corners);

// ---------------------------------------------------------------------------
// Quadrature on the reference triangle.

struct QuadratureRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;  // sum to 1; multiply by the element area
  int degree = 0;

  std::size_t size() const { return weights.size(); }
  Point reference_point(std::size_t i) const {
    return {barycentric[i][1], barycentric[i][2]};
  }
};

/// Rules for degree 1..10. Degree 1 is the centroid rule, 2 the three-point
/// rule, 5 the seven-point Radon rule; other degrees use a collapsed
/// Gauss-Legendre product. Exactness is verified at construction.
const QuadratureRule& quadrature_rule(int degree);

/// Exact integral of xi^a eta^b over the reference triangle.
double reference_monomial_integral(int a, int b);

// ---------------------------------------------------------------------------
// Shape functions on the reference triangle. P2 ordering: three vertices, then
// the midpoints of local edges (0,1), (1,2), (2,0).

std::array<double, 3> p1_values(const Point& xi);
const std::array<Eigen::Vector2d, 3>& p1_reference_gradients();
std::array<double, 6> p2_values(const Point& xi);
std::array<Eigen::Vector2d, 6> p2_reference_gradients(const Point& xi);

// ---------------------------------------------------------------------------
// Degrees of freedom.

/// Element-to-global dof table with a fixed number of dofs per element.
struct DofMap {
  int num_dofs = 0;
  int per_element = 0;
  std::vector<int> indices;  // element-major

  int num_elements() const { return per_element ? static_cast<int>(indices.size()) / per_element : 0; }
  std::span<const int> element(int t) const {
    return {indices.data() + static_cast<std::size_t>(t) * per_element,
            static_cast<std::size_t>(per_element)};
  }
};

/// Concatenates dof maps element by element; the global dofs of part k are
/// offset by the dof counts of parts 0..k-1.
DofMap concatenate(std::span<const DofMap> parts);

enum class SpaceKind { P1Scalar, P1Vector, P2Vector };

/// Lagrange space on a mesh. Vector dofs are interleaved: the components of
/// scalar dof s are 2s and 2s + 1, locally and globally. P2 scalar dofs number
/// the mesh nodes first and then the edges of the EdgeTable.
class FunctionSpace {
 public:
  FunctionSpace(const Mesh& mesh, SpaceKind kind);

  struct DofLocation {
    bool on_edge = false;
    int entity = -1;  // node or edge index
    int component = 0;
  };

  SpaceKind kind() const { return kind_; }
  const Mesh& mesh() const { return *mesh_; }
  const EdgeTable& edges() const { return edges_; }
  const DofMap& dofs() const { return dofs_; }
  int num_dofs() const { return dofs_.num_dofs; }
  int components() const { return kind_ == SpaceKind::P1Scalar ? 1 : 2; }
  int scalar_per_element() const { return kind_ == SpaceKind::P2Vector ? 6 : 3; }

  DofLocation locate(int dof) const;

  /// Coordinates of the Lagrange point carrying scalar dof s.
  Point scalar_dof_point(int s) const;

 private:
  const Mesh* mesh_;
  SpaceKind kind_;
  EdgeTable edges_;
  DofMap dofs_;
};

struct FieldSample {
  Eigen::VectorXd value;     // one entry per component
  Eigen::MatrixXd gradient;  // components x 2
};

/// Value and gradient of a finite element field at a barycentric point of a
/// triangle. Throws a Contract error for size mismatches or bad triangle ids.
FieldSample evaluate_field(const FunctionSpace& space, const Eigen::VectorXd& coefficients,
                           int triangle, const std::array<double, 3>& barycentric);

// ---------------------------------------------------------------------------
// Assembly

using MatrixKernel = std::function<void(int element, Eigen::MatrixXd& local)>;
using VectorKernel = std::function<void(int element, Eigen::VectorXd& local)>;
using SystemKernel = std::function<void(int element, Eigen::MatrixXd& local_matrix,
                                        Eigen::VectorXd& local_vector)>;

/// Precomputed sparsity pattern and scatter positions for one pair of dof
/// maps. Element contributions are accumulated in element order, so repeated
/// assemblies are bitwise reproducible.
class Assembler {
 public:
  Assembler(const DofMap& rows, const DofMap& cols);

  const SparseMatrix& pattern() const { return pattern_; }

  SparseMatrix assemble_matrix(const MatrixKernel& kernel) const;
  Eigen::VectorXd assemble_vector(const VectorKernel& kernel) const;
  /// Square systems only: matrix and row vector from one element loop.
  void assemble_system(const SystemKernel& kernel, SparseMatrix& matrix, Eigen::VectorXd& vector) const;

 private:
  DofMap rows_;
  DofMap cols_;
  SparseMatrix pattern_;
  std::vector<int> positions_;  // element-major, per_row x per_col each
};

SparseMatrix assemble_operator(const DofMap& rows, const DofMap& cols, const MatrixKernel& kernel);
Eigen::VectorXd assemble_functional(const DofMap& dofs, const VectorKernel& kernel);

/// Symmetric elimination: constrained rows and columns are zeroed with a unit
/// diagonal, known column contributions move to the right-hand side, and the
/// constrained rhs entries take the prescribed values. Duplicate dofs must
/// carry identical values.
void apply_dirichlet(SparseMatrix& matrix, Eigen::VectorXd& rhs, std::span<const int> dofs,
                     std::span<const double> values);

}  // namespace lipshape
