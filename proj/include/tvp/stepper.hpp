#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvp/diagnostics.hpp"
#include "tvp/fields.hpp"
#include "tvp/kernels.hpp"
#include "tvp/lifting.hpp"
#include "tvp/mesh.hpp"
#include "tvp/scenario.hpp"

namespace tvp {

struct SimState {
  double t = 0.0;
  FieldVector u, u_t;
  FieldScalar theta;   // shifted temperature (boundary lifting removed)
  FieldTensor eps_p;
  FieldTensor T;       // cached stress C(eps(u) - eps_p)
};

struct StepReport {
  int r_iters = 0;
  int p_iters_total = 0;
  double contraction_R = 0.0, contraction_P = 0.0;  // worst increment ratios
  double residual_R = 0.0, residual_P = 0.0;        // final relative increments
};

struct InnerSolution {
  FieldVector u, u_t;
  FieldTensor eps_p, strain;
  int iters = 0;
  double contraction = 0.0;
  double residual = 0.0;
};

class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Owns the assembled operators, factorizations, and the boundary lifting for
// one scenario; all members are immutable after construction, so a Simulator
// can be shared by repeated runs.
class Simulator {
 public:
  explicit Simulator(const Scenario& sc);

  const Scenario& scenario() const { return sc_; }
  const Mesh2D& mesh() const { return mesh_; }
  const LiftingSeries& lifting() const { return lifting_; }
  const SpMat& mass() const { return M_; }
  const SpMat& heat_stiffness() const { return A_; }
  const SpMat& elasticity() const { return K_; }
  double dt() const { return dt_; }
  int n_steps() const { return n_steps_; }

  SimState initial_state() const;

  // Damped elastic solve for u_t(0) consistent with the initial stress.
  FieldVector initial_velocity(const FieldVector& u0, const FieldTensor& eps_p0,
                               const FieldScalar& theta_shifted0) const;

  // Element-local inelastic update over one step with frozen total strain.
  FieldTensor epsilon_p_update(const FieldTensor& eps_p_n,
                               const FieldTensor& strain_star) const;

  // Implicit elastic/damped solve at time level `level`; returns (u, u_t).
  std::pair<FieldVector, FieldVector> elastic_solve(const FieldTensor& eps_p,
                                                    const FieldScalar& theta_star,
                                                    const FieldVector& u_n,
                                                    int level) const;

  // Implicit heat update with frozen stress/rate/velocity/coefficient fields.
  FieldScalar heat_solve(const FieldScalar& theta_n, const FieldTensor& T_new,
                         const FieldTensor& eps_p_rate, const FieldVector& u_t,
                         const FieldScalar& theta_star, int level) const;

  // Inner fixed point over the total strain (theta frozen).  The optional
  // initial iterate overrides the default eps(u_n).
  InnerSolution picard_P(const FieldScalar& theta_star, const SimState& from,
                         int level,
                         const FieldTensor* strain_star_init = nullptr) const;

  // Outer fixed point over the shifted temperature; returns the accepted
  // state at `level` and the iteration report.  Throws StepFailure when an
  // iteration budget is exhausted.
  std::pair<SimState, StepReport> step(const SimState& from, int level,
                                       const FieldScalar* theta_star_init = nullptr) const;

 private:
  FieldVector elem_load(const FieldTensor& field) const;   // int field : eps(v)
  FieldVector force_load(const Eigen::Vector2d& F) const;  // int F . v
  FieldScalar coupling_coeffs(const FieldScalar& theta_star, int level) const;

  Scenario sc_;
  Mesh2D mesh_;
  SpMat M_, A_, K_;
  std::unique_ptr<DirichletSolver> dirichlet_;
  Eigen::SimplicialLLT<SpMat> heat_llt_;  // M + dt A
  LiftingSeries lifting_;
  double dt_ = 0.0;
  int n_steps_ = 0;
};

struct RunResult {
  std::vector<SimState> trajectory;     // levels 0..n (shorter on failure)
  std::vector<FieldTensor> rates;       // (eps_p_n - eps_p_{n-1}) / dt per step
  RunDiagnostics diag;
  bool failed = false;
  std::string failure;
  int failed_level = -1;
};

RunResult run(const Simulator& sim);
RunResult run(const Scenario& sc);

}  // namespace tvp
