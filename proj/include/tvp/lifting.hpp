#pragma once

#include <span>
#include <vector>

#include "tvp/mesh.hpp"

namespace tvp {

// Discrete boundary-data lifting: implicit Euler for
//   theta_tilde_t - Laplace(theta_tilde) = 0,  d(theta_tilde)/dn = g,
// starting from theta_tilde(0) = theta0.  The shifted temperature unknown
// of the stepper then starts at zero and sees a homogeneous Neumann wall;
// outputs are recombined as theta_hat = theta + theta_tilde.
struct LiftingSeries {
  double dt = 0.0;
  std::vector<FieldScalar> theta;    // levels 0..n_steps
  std::vector<FieldScalar> theta_t;  // backward differences; level 0 is zero
  double max_h1 = 0.0;               // max_n sqrt(theta' (M + A) theta)
  double sum_dt_theta_t_sq = 0.0;    // sum_{n>=1} dt * theta_t' M theta_t
};

// g_levels[n] holds nodal boundary data at time n*dt (interior entries
// ignored); it must have n_steps + 1 entries, of which levels 1..n_steps
// are used.
LiftingSeries solve_lifting(const Mesh2D& mesh, const SpMat& M, const SpMat& A,
                            std::span<const FieldScalar> g_levels,
                            const FieldScalar& theta0, double dt);

// theta_hat at a time level.
FieldScalar recombine(const FieldScalar& theta, const LiftingSeries& lift,
                      int level);

}  // namespace tvp
