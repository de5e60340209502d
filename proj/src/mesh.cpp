#include "tvp/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace tvp {

Mesh2D Mesh2D::rectangle(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("mesh.nx and mesh.ny must be at least 1");
  if (!(lx > 0.0) || !(ly > 0.0))
    throw std::invalid_argument("mesh.lx and mesh.ly must be positive");

  Mesh2D m;
  m.nx = nx; m.ny = ny; m.lx = lx; m.ly = ly;

  const double hx = lx / nx, hy = ly / ny;
  m.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.emplace_back(i * hx, j * hy);

  auto nid = [&](int i, int j) { return j * (nx + 1) + i; };

  m.tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = nid(i, j), n10 = nid(i + 1, j);
      const int n01 = nid(i, j + 1), n11 = nid(i + 1, j + 1);
      m.tris.push_back({n00, n10, n11});
      m.tris.push_back({n00, n11, n01});
    }

  m.areas.resize(m.tris.size());
  m.grads.resize(m.tris.size());
  for (size_t e = 0; e < m.tris.size(); ++e) {
    const auto& t = m.tris[e];
    const Eigen::Vector2d p0 = m.nodes[t[0]], p1 = m.nodes[t[1]], p2 = m.nodes[t[2]];
    const Eigen::Vector2d e1 = p1 - p0, e2 = p2 - p0;
    const double twoA = e1.x() * e2.y() - e1.y() * e2.x();
    if (!(twoA > 0.0))
      throw std::runtime_error("mesh: degenerate or inverted triangle");
    m.areas[e] = 0.5 * twoA;
    // grad phi_i = (y_j - y_k, x_k - x_j) / (2A), (i, j, k) cyclic
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d pj = m.nodes[t[(i + 1) % 3]];
      const Eigen::Vector2d pk = m.nodes[t[(i + 2) % 3]];
      m.grads[e][i] = Eigen::Vector2d(pj.y() - pk.y(), pk.x() - pj.x()) / twoA;
    }
  }

  // boundary edges, counter-clockwise starting at the origin corner
  auto add_edge = [&](int a, int b, Eigen::Vector2d normal) {
    m.boundary_edges.push_back({a, b, normal, (m.nodes[b] - m.nodes[a]).norm()});
  };
  for (int i = 0; i < nx; ++i) add_edge(nid(i, 0), nid(i + 1, 0), {0.0, -1.0});
  for (int j = 0; j < ny; ++j) add_edge(nid(nx, j), nid(nx, j + 1), {1.0, 0.0});
  for (int i = nx; i > 0; --i) add_edge(nid(i, ny), nid(i - 1, ny), {0.0, 1.0});
  for (int j = ny; j > 0; --j) add_edge(nid(0, j), nid(0, j - 1), {-1.0, 0.0});

  for (const auto& e : m.boundary_edges) {
    m.boundary_nodes.push_back(e.a);
    m.boundary_nodes.push_back(e.b);
  }
  std::sort(m.boundary_nodes.begin(), m.boundary_nodes.end());
  m.boundary_nodes.erase(
      std::unique(m.boundary_nodes.begin(), m.boundary_nodes.end()),
      m.boundary_nodes.end());

  return m;
}

SymTensor3 basis_strain(const Mesh2D& mesh, int e, int a, int c) {
  const Eigen::Vector2d g = mesh.grads[e][a];
  if (c == 0) return embed2d(g.x(), 0.0, 0.5 * g.y());
  return embed2d(0.0, g.y(), 0.5 * g.x());
}

FieldTensor strain_of(const Mesh2D& mesh, const FieldVector& u) {
  FieldTensor eps(mesh.n_elems());
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const auto& t = mesh.tris[e];
    double exx = 0.0, eyy = 0.0, exy2 = 0.0;  // exy2 = 2*eps_xy
    for (int a = 0; a < 3; ++a) {
      const Eigen::Vector2d g = mesh.grads[e][a];
      const double ux = u[2 * t[a]], uy = u[2 * t[a] + 1];
      exx += ux * g.x();
      eyy += uy * g.y();
      exy2 += ux * g.y() + uy * g.x();
    }
    eps[e] = embed2d(exx, eyy, 0.5 * exy2);
  }
  return eps;
}

SpMat assemble_elasticity(const Mesh2D& mesh, const ElasticityTensor& C) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.n_elems() * 36);
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const auto& t = mesh.tris[e];
    std::array<SymTensor3, 6> B;
    std::array<int, 6> dof;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 2; ++c) {
        B[2 * a + c] = basis_strain(mesh, e, a, c);
        dof[2 * a + c] = 2 * t[a] + c;
      }
    for (int a = 0; a < 6; ++a) {
      const SymTensor3 CB = C.apply(B[a]);
      for (int b = 0; b < 6; ++b)
        trip.emplace_back(dof[a], dof[b], mesh.areas[e] * inner(CB, B[b]));
    }
  }
  SpMat K(2 * mesh.n_nodes(), 2 * mesh.n_nodes());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

std::pair<SpMat, SpMat> assemble_heat(const Mesh2D& mesh) {
  std::vector<Eigen::Triplet<double>> tm, ta;
  tm.reserve(mesh.n_elems() * 9);
  ta.reserve(mesh.n_elems() * 9);
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const auto& t = mesh.tris[e];
    const double A = mesh.areas[e];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        tm.emplace_back(t[a], t[b], A / 12.0 * (a == b ? 2.0 : 1.0));
        ta.emplace_back(t[a], t[b], A * mesh.grads[e][a].dot(mesh.grads[e][b]));
      }
  }
  SpMat M(mesh.n_nodes(), mesh.n_nodes()), A(mesh.n_nodes(), mesh.n_nodes());
  M.setFromTriplets(tm.begin(), tm.end());
  A.setFromTriplets(ta.begin(), ta.end());
  return {M, A};
}

FieldScalar boundary_loads(const Mesh2D& mesh, const FieldScalar& g) {
  FieldScalar l = FieldScalar::Zero(mesh.n_nodes());
  for (const auto& e : mesh.boundary_edges) {
    // int_edge g phi ds with both g and phi linear on the edge
    l[e.a] += e.length * (2.0 * g[e.a] + g[e.b]) / 6.0;
    l[e.b] += e.length * (g[e.a] + 2.0 * g[e.b]) / 6.0;
  }
  return l;
}

DirichletSolver::DirichletSolver(const Mesh2D& mesh, const SpMat& K)
    : n_dofs_(2 * mesh.n_nodes()) {
  std::vector<char> is_fixed(n_dofs_, 0);
  for (int n : mesh.boundary_nodes) {
    is_fixed[2 * n] = 1;
    is_fixed[2 * n + 1] = 1;
  }
  std::vector<int> pos(n_dofs_, -1);
  for (int d = 0; d < n_dofs_; ++d) {
    if (is_fixed[d]) {
      pos[d] = static_cast<int>(fixed_.size());
      fixed_.push_back(d);
    } else {
      pos[d] = static_cast<int>(free_.size());
      free_.push_back(d);
    }
  }

  std::vector<Eigen::Triplet<double>> tff, tfc;
  for (int col = 0; col < K.outerSize(); ++col)
    for (SpMat::InnerIterator it(K, col); it; ++it) {
      const int r = static_cast<int>(it.row()), c = col;
      if (!is_fixed[r] && !is_fixed[c])
        tff.emplace_back(pos[r], pos[c], it.value());
      else if (!is_fixed[r] && is_fixed[c])
        tfc.emplace_back(pos[r], pos[c], it.value());
    }
  K_ff_.resize(static_cast<int>(free_.size()), static_cast<int>(free_.size()));
  K_ff_.setFromTriplets(tff.begin(), tff.end());
  K_fc_.resize(static_cast<int>(free_.size()), static_cast<int>(fixed_.size()));
  K_fc_.setFromTriplets(tfc.begin(), tfc.end());

  if (free_.empty()) return;  // fully constrained (single-cell meshes)
  llt_.compute(K_ff_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error(
        "constrained elasticity operator is not positive definite");
}

FieldVector DirichletSolver::solve(double scale, const FieldVector& rhs,
                                   const Eigen::VectorXd& g) const {
  if (!(scale > 0.0))
    throw std::invalid_argument("DirichletSolver::solve requires scale > 0");
  if (rhs.size() != n_dofs_ || g.size() != static_cast<Eigen::Index>(fixed_.size()))
    throw std::invalid_argument("DirichletSolver::solve: size mismatch");

  FieldVector u = FieldVector::Zero(n_dofs_);
  for (size_t k = 0; k < fixed_.size(); ++k) u[fixed_[k]] = g[k];
  if (free_.empty()) return u;

  Eigen::VectorXd b(free_.size());
  for (size_t k = 0; k < free_.size(); ++k) b[k] = rhs[free_[k]];
  b -= scale * (K_fc_ * g);
  const Eigen::VectorXd x = llt_.solve(b) / scale;
  for (size_t k = 0; k < free_.size(); ++k) u[free_[k]] = x[k];
  return u;
}

}  // namespace tvp
