#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "tvp/tensor.hpp"

namespace tvp {

using SpMat = Eigen::SparseMatrix<double>;
using FieldScalar = Eigen::VectorXd;           // one value per node
using FieldVector = Eigen::VectorXd;           // interleaved (ux, uy) per node
using FieldTensor = std::vector<SymTensor3>;   // one value per element

// Structured triangulation of [0, lx] x [0, ly]: nx*ny cells, each split
// along the (i, j) -> (i+1, j+1) diagonal into two CCW triangles.
// Node (i, j) has index j*(nx+1) + i; displacement dofs are (2n, 2n+1).
struct Mesh2D {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;

  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> tris;

  struct Edge {
    int a, b;                 // node indices, ordered along the boundary
    Eigen::Vector2d normal;   // outward unit normal
    double length;
  };
  std::vector<Edge> boundary_edges;
  std::vector<int> boundary_nodes;  // sorted, unique

  // per-element geometry
  std::vector<double> areas;
  std::vector<std::array<Eigen::Vector2d, 3>> grads;  // P1 basis gradients

  static Mesh2D rectangle(int nx, int ny, double lx, double ly);

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elems() const { return static_cast<int>(tris.size()); }
  double domain_area() const { return lx * ly; }

  Eigen::Vector2d centroid(int e) const {
    const auto& t = tris[e];
    return (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]) / 3.0;
  }
  // mean of the three nodal values (exact centroid value for P1 fields)
  double centroid_mean(const FieldScalar& v, int e) const {
    const auto& t = tris[e];
    return (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
  }
};

// Plane-strain P1 strain of the unit shape (local node a, component c) on
// element e, embedded as a symmetric 3x3 tensor with zero out-of-plane rows.
SymTensor3 basis_strain(const Mesh2D& mesh, int e, int a, int c);

// Elementwise strain of a nodal displacement field.
FieldTensor strain_of(const Mesh2D& mesh, const FieldVector& u);

// Stiffness of the damped/elastic operator: K[a][b] = sum_e area * C(B_a):B_b.
SpMat assemble_elasticity(const Mesh2D& mesh, const ElasticityTensor& C);

// (mass, stiffness) for the scalar heat operator with P1 elements; the mass
// matrix is the exact (consistent) one.
std::pair<SpMat, SpMat> assemble_heat(const Mesh2D& mesh);

// Neumann load l_i = int_{boundary} g phi_i ds for nodal boundary data g
// (interior entries of g are ignored); edgewise trapezoid = exact for P1 g.
FieldScalar boundary_loads(const Mesh2D& mesh, const FieldScalar& g);

// Direct solver for the vector elasticity operator with both displacement
// components prescribed on the whole boundary.  The constrained block is
// factored once (Cholesky); solve() handles any positive multiple of K, so
// one factorization serves both the initial-velocity solve (scale 1) and the
// time-step solves (scale 1 + 1/dt).
class DirichletSolver {
 public:
  DirichletSolver(const Mesh2D& mesh, const SpMat& K);

  // Solve (scale*K) u = rhs, u = g on boundary dofs.  rhs is a full-length
  // vector; g holds (ux, uy) per boundary node in mesh.boundary_nodes order.
  FieldVector solve(double scale, const FieldVector& rhs,
                    const Eigen::VectorXd& g) const;

  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& fixed_dofs() const { return fixed_; }

 private:
  int n_dofs_;
  std::vector<int> free_, fixed_;
  SpMat K_ff_, K_fc_;
  Eigen::SimplicialLLT<SpMat> llt_;
};

}  // namespace tvp
