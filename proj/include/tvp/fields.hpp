#pragma once

#include "tvp/mesh.hpp"
#include "tvp/scenario.hpp"

namespace tvp {

// Nodal interpolants of the scenario data and boundary samples shared by the
// stepper, the lifting driver, and the output writers.

FieldVector nodal_u0(const Mesh2D& mesh, const AffineDisplacement& u0);
FieldScalar nodal_theta0(const Mesh2D& mesh, const AffineScalar& theta0);
FieldScalar nodal_gtheta(const Mesh2D& mesh, const ScalarBC& g, double t);

// (ux, uy) per boundary node in mesh.boundary_nodes order, matching the
// fixed-dof layout of DirichletSolver.
Eigen::VectorXd boundary_gd(const Mesh2D& mesh, const DisplacementBC& g, double t);
Eigen::VectorXd boundary_gd_rate(const Mesh2D& mesh, const DisplacementBC& g, double t);

}  // namespace tvp
