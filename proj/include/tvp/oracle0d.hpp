#pragma once

#include <vector>

#include "tvp/constitutive.hpp"
#include "tvp/scenario.hpp"

namespace tvp {

// Reference integrator for the element-local model with a prescribed strain
// history eps(t):
//   d/dt eps_p = G_lambda(dev T),            T = C(eps(t) - eps_p),
//   d/dt theta = truncate(dev T : d/dt eps_p) - f(truncate(theta)) tr(d/dt eps),
// where G_lambda is the Yosida gradient for lambda > 0 and the exact power
// flow rule for lambda = 0.  Classical RK4 on a uniform grid.

struct OracleState {
  double t = 0.0;
  SymTensor3 eps, eps_p, T;
  double theta = 0.0;
};

struct OracleTrajectory {
  double t_final = 0.0;
  int n_steps = 0;
  std::vector<OracleState> states;      // n_steps + 1 uniform samples
  double richardson_error = -1.0;       // vs a 2x-refined run; -1 = not requested
};

SymTensor3 oracle_strain(const OracleSpec& spec, double t);
SymTensor3 oracle_strain_rate(const OracleSpec& spec, double t);

OracleTrajectory integrate_oracle(const MaterialParams& mat, const OracleSpec& spec,
                                  double t_final, double theta_init,
                                  const SymTensor3& eps_p_init,
                                  bool with_richardson = false);

//======================================================================
// stepper comparison on a spatially homogeneous scenario
//======================================================================

struct CompareRow {
  double dt = 0.0;
  double err = 0.0;  // max over levels of the worst field discrepancy
};

// Runs the stepper at dt, dt/2, ..., dt/2^n_halvings on a single-cell,
// spatially homogeneous scenario and measures each run against one
// high-resolution oracle trajectory with the same Yosida lambda.  Rejects
// scenarios whose data break homogeneity.
std::vector<CompareRow> compare_with_stepper(const Scenario& sc, int n_halvings);

struct LambdaGapRow {
  double lambda = 0.0;
  double gap = 0.0;  // stepper(lambda) vs exact-flow oracle (lambda = 0)
};

// Fixed dt, descending lambda ladder: gap to the lambda = 0 oracle.
std::vector<LambdaGapRow> lambda_gap(const Scenario& sc,
                                     const std::vector<double>& lambdas);

}  // namespace tvp
