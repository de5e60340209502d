#pragma once

#include <string>
#include <vector>

#include "tvp/mesh.hpp"
#include "tvp/scenario.hpp"

namespace tvp {

// One diagnostics.csv row per accepted time level.
struct StepRow {
  double t = 0.0;
  double E_total = 0.0, E_thermal = 0.0, E_elastic = 0.0;
  double min_dissipation = 0.0;
  double norm_T = 0.0;          // sqrt(sum_e area |T_e|^2)
  double norm_eps_ut_sq = 0.0;  // sum_e area |eps(u_t)_e|^2
  int picard_R_iters = 0;
  int picard_P_iters_total = 0;
  double contraction_R = 0.0, contraction_P = 0.0;
};

struct RunDiagnostics {
  std::vector<StepRow> rows;

  // ladder metrics accumulated over the run
  double sup_norm_T = 0.0;            // over all levels
  double sum_dt_norm_Tt_sq = 0.0;     // sum_n dt ||(T_n - T_{n-1})/dt||^2
  double sum_dt_norm_eps_ut_sq = 0.0; // sum_n dt ||eps(u_t_n)||^2
  double resolvent_metric = 0.0;      // lambda sum_n dt ||grad M_lambda(dev T_n)||^2
  double max_flow_residual = 0.0;     // Yosida identity gap, relative
  double lifting_max_h1 = 0.0;
  double lifting_sum_dt_theta_t_sq = 0.0;
};

// int theta_hat dx (P1-exact midpoint form).
double thermal_energy(const Mesh2D& mesh, const FieldScalar& theta_hat);

// 1/2 int C^{-1} T : T dx over elementwise-constant stress.
double elastic_energy(const Mesh2D& mesh, const ElasticityTensor& C,
                      const FieldTensor& T);

// min over elements of dev(T_e) : rate_e   (the pointwise plastic-dissipation
// integrand; nonnegative up to solver tolerances).
double dissipation_min(const Mesh2D& mesh, const FieldTensor& T,
                       const FieldTensor& rate);

// sqrt(sum_e area |v_e|^2)
double field_l2(const Mesh2D& mesh, const FieldTensor& v);

//======================================================================
// regularization-parameter sweep
//======================================================================

struct SweepRun {
  double lambda = 0.0;
  bool failed = false;
  std::string failure;
  bool picard_ok = false;
  double min_dissipation = 0.0;  // over all steps
  RunDiagnostics diag;
};

struct SweepPair {
  double lambda_a = 0.0, lambda_b = 0.0;
  double sup_diff_T = 0.0;  // sup over levels and elements of |T_a - T_b|
};

struct SweepResult {
  std::vector<SweepRun> runs;
  std::vector<SweepPair> pairs;        // consecutive ladder entries
  double spread_sup_T = 0.0;           // (max - min) / max over runs
  double spread_sum_Tt = 0.0;
  bool cauchy_decreasing = false;      // pairs strictly decreasing
  bool resolvent_decreasing = false;   // resolvent_metric strictly decreasing
  bool all_ok = false;
};

// Re-runs the scenario once per ladder entry with material.yosida_lambda
// replaced; the ladder is processed in the order given (typically
// descending).  Runs are serial and deterministic.
SweepResult sweep_lambda(const Scenario& sc, const std::vector<double>& lambdas);

}  // namespace tvp
