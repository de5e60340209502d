#include "tvp/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "tvp/csv.hpp"
#include "tvp/diagnostics.hpp"
#include "tvp/oracle0d.hpp"
#include "tvp/stepper.hpp"

namespace tvp::cli {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

std::string diagnostics_csv(const RunDiagnostics& diag) {
  std::ostringstream out;
  out << "t,E_total,E_thermal,E_elastic,min_dissipation,norm_T,"
         "norm_eps_ut_sq,picard_R_iters,picard_P_iters_total,contraction_R,"
         "contraction_P\n";
  for (const StepRow& r : diag.rows) {
    out << csv::num(r.t) << ',' << csv::num(r.E_total) << ','
        << csv::num(r.E_thermal) << ',' << csv::num(r.E_elastic) << ','
        << csv::num(r.min_dissipation) << ',' << csv::num(r.norm_T) << ','
        << csv::num(r.norm_eps_ut_sq) << ',' << csv::num(r.picard_R_iters)
        << ',' << csv::num(r.picard_P_iters_total) << ','
        << csv::num(r.contraction_R) << ',' << csv::num(r.contraction_P)
        << '\n';
  }
  return out.str();
}

std::string fields_csv(const Mesh2D& mesh, const SimState& st,
                       const FieldScalar& theta_hat) {
  std::ostringstream out;
  out << "# nodes\n";
  out << "id,x,y,ux,uy,theta_hat\n";
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    out << csv::num(n) << ',' << csv::num(mesh.nodes[n].x()) << ','
        << csv::num(mesh.nodes[n].y()) << ',' << csv::num(st.u[2 * n]) << ','
        << csv::num(st.u[2 * n + 1]) << ',' << csv::num(theta_hat[n]) << '\n';
  }
  out << "# elements\n";
  out << "id,epsp_xx,epsp_yy,epsp_zz,epsp_xy,epsp_yz,epsp_xz,"
         "T_xx,T_yy,T_zz,T_xy,T_yz,T_xz\n";
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const SymTensor3& ep = st.eps_p[e];
    const SymTensor3& T = st.T[e];
    out << csv::num(e) << ',' << csv::num(ep.xx) << ',' << csv::num(ep.yy)
        << ',' << csv::num(ep.zz) << ',' << csv::num(ep.xy) << ','
        << csv::num(ep.yz) << ',' << csv::num(ep.xz) << ',' << csv::num(T.xx)
        << ',' << csv::num(T.yy) << ',' << csv::num(T.zz) << ','
        << csv::num(T.xy) << ',' << csv::num(T.yz) << ',' << csv::num(T.xz)
        << '\n';
  }
  return out.str();
}

Scenario load(const std::string& path, bool serial) {
  Scenario sc = load_scenario(path);
  if (serial) sc.solver.exec = kernels::Exec::Serial;
  return sc;
}

}  // namespace

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            bool serial) {
  const Scenario sc = load(scenario_path, serial);
  const Simulator sim(sc);
  const RunResult rr = run(sim);

  ensure_dir(out_dir);
  csv::write_file(out_dir + "/diagnostics.csv", diagnostics_csv(rr.diag));
  for (size_t n = 0; n < rr.trajectory.size(); ++n) {
    const FieldScalar theta_hat =
        recombine(rr.trajectory[n].theta, sim.lifting(), static_cast<int>(n));
    csv::write_file(out_dir + "/fields_" + std::to_string(n) + ".csv",
                    fields_csv(sim.mesh(), rr.trajectory[n], theta_hat));
  }

  if (rr.failed) {
    csv::write_file(out_dir + "/FAILED",
                    "step " + std::to_string(rr.failed_level) + ": " +
                        rr.failure + "\n");
    std::cout << "run " << sc.name << ": FAILED at step " << rr.failed_level
              << ": " << rr.failure << "\n";
    return 1;
  }
  std::cout << "run " << sc.name << ": " << sim.n_steps() << " steps, E0 = "
            << csv::num(rr.diag.rows.front().E_total)
            << ", E_final = " << csv::num(rr.diag.rows.back().E_total) << "\n";
  return 0;
}

int cmd_sweep(const std::string& scenario_path,
              const std::vector<double>& lambdas, const std::string& out_dir,
              bool serial) {
  const Scenario sc = load(scenario_path, serial);
  const SweepResult sw = sweep_lambda(sc, lambdas);

  std::ostringstream out;
  out << "lambda,sup_norm_T,sum_dt_norm_Tt_sq,sum_dt_norm_eps_ut_sq,"
         "resolvent_metric,min_dissipation,picard_ok\n";
  for (const SweepRun& r : sw.runs) {
    out << csv::num(r.lambda) << ',' << csv::num(r.diag.sup_norm_T) << ','
        << csv::num(r.diag.sum_dt_norm_Tt_sq) << ','
        << csv::num(r.diag.sum_dt_norm_eps_ut_sq) << ','
        << csv::num(r.diag.resolvent_metric) << ','
        << csv::num(r.min_dissipation) << ',' << (r.picard_ok ? 1 : 0) << '\n';
  }
  if (!sw.pairs.empty()) {
    out << "# pairwise\n";
    out << "lambda_a,lambda_b,sup_diff_T\n";
    for (const SweepPair& p : sw.pairs)
      out << csv::num(p.lambda_a) << ',' << csv::num(p.lambda_b) << ','
          << csv::num(p.sup_diff_T) << '\n';
  }
  ensure_dir(out_dir);
  csv::write_file(out_dir + "/sweep.csv", out.str());

  auto verdict = [](bool ok, const std::string& label, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    return ok;
  };
  bool ok = true;
  ok &= verdict(sw.all_ok, "all ladder runs completed", "");
  double min_diss = 0.0;
  for (const SweepRun& r : sw.runs)
    if (!r.failed) min_diss = std::min(min_diss, r.min_dissipation);
  ok &= verdict(sw.all_ok && min_diss >= -1e-12, "dissipation nonnegative",
                "min " + csv::num(min_diss));
  ok &= verdict(sw.all_ok && sw.spread_sup_T < 0.20, "sup-norm stress spread < 20%",
                "spread " + csv::num(sw.spread_sup_T));
  ok &= verdict(sw.all_ok && sw.spread_sum_Tt < 0.20,
                "stress-rate integral spread < 20%",
                "spread " + csv::num(sw.spread_sum_Tt));
  ok &= verdict(sw.cauchy_decreasing, "pairwise gaps strictly decreasing", "");
  ok &= verdict(sw.resolvent_decreasing, "regularization metric decreasing", "");
  return ok ? 0 : 1;
}

int cmd_check(const std::string& scenario_path, bool serial) {
  const Scenario sc = load(scenario_path, serial);
  const Simulator sim(sc);
  const RunResult rr = run(sim);

  bool all_ok = true;
  auto report = [&](bool ok, const std::string& label, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << label;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    all_ok &= ok;
  };

  report(true, "scenario loads and validates", sc.name);
  report(!rr.failed, "run completes",
         rr.failed ? "step " + std::to_string(rr.failed_level) + ": " + rr.failure
                   : std::to_string(sim.n_steps()) + " steps");

  double max_trace = 0.0, max_cache_gap = 0.0;
  for (const SimState& st : rr.trajectory) {
    for (const SymTensor3& ep : st.eps_p)
      max_trace = std::max(max_trace, std::abs(ep.trace()));
    const FieldTensor eps = strain_of(sim.mesh(), st.u);
    for (int e = 0; e < sim.mesh().n_elems(); ++e) {
      const SymTensor3 want =
          sc.material.elasticity.apply(eps[e] - st.eps_p[e]);
      max_cache_gap = std::max(
          max_cache_gap, norm(want - st.T[e]) / (1.0 + norm(want)));
    }
  }
  report(max_trace <= 1e-10, "inelastic strain stays traceless",
         "max |trace| " + csv::num(max_trace));
  report(max_cache_gap <= 1e-10, "stress cache consistent",
         "max gap " + csv::num(max_cache_gap));

  double min_diss = 0.0;
  for (size_t n = 1; n < rr.diag.rows.size(); ++n)
    min_diss = std::min(min_diss, rr.diag.rows[n].min_dissipation);
  report(min_diss >= -1e-12, "plastic dissipation nonnegative",
         "min " + csv::num(min_diss));

  report(rr.diag.max_flow_residual <= 1e-10, "flow-rule residual",
         "max " + csv::num(rr.diag.max_flow_residual));

  bool picard_ok = !rr.failed;
  double worst_ratio = 0.0;
  for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
    const StepRow& r = rr.diag.rows[n];
    worst_ratio = std::max({worst_ratio, r.contraction_R, r.contraction_P});
    if (r.picard_R_iters > sc.solver.picard_max) picard_ok = false;
  }
  report(picard_ok && worst_ratio < 1.0, "Picard iterations contract",
         "worst ratio " + csv::num(worst_ratio));

  if (sc.closed() && !rr.failed) {
    const double E0 = rr.diag.rows.front().E_total;
    bool mono = true;
    double worst_jump = 0.0;
    for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
      const double jump =
          rr.diag.rows[n].E_total - rr.diag.rows[n - 1].E_total;
      worst_jump = std::max(worst_jump, jump);
      if (jump > 1e-8 * std::abs(E0)) mono = false;
    }
    report(mono, "energy ledger nonincreasing",
           "worst jump " + csv::num(worst_jump));
  } else {
    std::cout << "SKIP energy ledger (scenario is not closed)\n";
  }

  return all_ok ? 0 : 1;
}

int cmd_oracle(const std::string& scenario_path, const std::string& out_dir,
               bool compare, int n_halvings, const std::vector<double>& lambdas,
               bool serial) {
  const Scenario sc = load(scenario_path, serial);

  const OracleTrajectory tr =
      integrate_oracle(sc.material, sc.oracle, sc.time.t_final, sc.theta0.c,
                       sc.epsp0, /*with_richardson=*/true);

  const int stride = sc.oracle.stride > 0
                         ? sc.oracle.stride
                         : std::max(1, sc.oracle.n_steps / 1000);
  std::ostringstream out;
  out << "t,eps_xx,eps_yy,eps_zz,eps_xy,eps_yz,eps_xz,"
         "epsp_xx,epsp_yy,epsp_zz,epsp_xy,epsp_yz,epsp_xz,"
         "T_xx,T_yy,T_zz,T_xy,T_yz,T_xz,theta\n";
  auto write_row = [&](const OracleState& s) {
    out << csv::num(s.t);
    for (const SymTensor3* ten : {&s.eps, &s.eps_p, &s.T})
      out << ',' << csv::num(ten->xx) << ',' << csv::num(ten->yy) << ','
          << csv::num(ten->zz) << ',' << csv::num(ten->xy) << ','
          << csv::num(ten->yz) << ',' << csv::num(ten->xz);
    out << ',' << csv::num(s.theta) << '\n';
  };
  for (size_t n = 0; n < tr.states.size(); n += stride) write_row(tr.states[n]);
  if ((tr.states.size() - 1) % stride != 0) write_row(tr.states.back());
  ensure_dir(out_dir);
  csv::write_file(out_dir + "/oracle.csv", out.str());

  std::ostringstream summary;
  summary << "n_steps,t_final,richardson_error\n";
  summary << csv::num(tr.n_steps) << ',' << csv::num(tr.t_final) << ','
          << csv::num(tr.richardson_error) << '\n';
  csv::write_file(out_dir + "/oracle_summary.csv", summary.str());
  std::cout << "oracle " << sc.name << ": " << tr.n_steps
            << " steps, richardson_error = " << csv::num(tr.richardson_error)
            << "\n";

  if (compare) {
    const auto rows = compare_with_stepper(sc, n_halvings);
    std::ostringstream cmp;
    cmp << "dt,err,ratio\n";
    for (size_t k = 0; k < rows.size(); ++k) {
      const double ratio = k > 0 && rows[k].err > 0.0
                               ? rows[k - 1].err / rows[k].err
                               : 0.0;
      cmp << csv::num(rows[k].dt) << ',' << csv::num(rows[k].err) << ','
          << csv::num(ratio) << '\n';
    }
    csv::write_file(out_dir + "/compare.csv", cmp.str());
    for (size_t k = 1; k < rows.size(); ++k)
      std::cout << "compare: dt " << csv::num(rows[k].dt) << " err "
                << csv::num(rows[k].err) << " ratio "
                << csv::num(rows[k - 1].err / rows[k].err) << "\n";
  }

  if (!lambdas.empty()) {
    const auto rows = lambda_gap(sc, lambdas);
    std::ostringstream gap;
    gap << "lambda,gap\n";
    for (const LambdaGapRow& r : rows)
      gap << csv::num(r.lambda) << ',' << csv::num(r.gap) << '\n';
    csv::write_file(out_dir + "/oracle_lambda_gap.csv", gap.str());
  }
  return 0;
}

int cmd_lifting(const std::string& scenario_path, const std::string& out_dir) {
  const Scenario sc = load_scenario(scenario_path);
  const Mesh2D mesh = Mesh2D::rectangle(sc.mesh.nx, sc.mesh.ny, sc.mesh.lx,
                                        sc.mesh.ly);
  const auto [M, A] = assemble_heat(mesh);
  const int n = sc.time.n_steps();
  std::vector<FieldScalar> g_levels;
  g_levels.reserve(n + 1);
  for (int k = 0; k <= n; ++k)
    g_levels.push_back(nodal_gtheta(mesh, sc.g_theta, k * sc.time.dt));
  const LiftingSeries lift = solve_lifting(mesh, M, A, g_levels,
                                           nodal_theta0(mesh, sc.theta0),
                                           sc.time.dt);

  std::ostringstream out;
  out << "level,t,node,x,y,theta_tilde,theta_tilde_t\n";
  for (int k = 0; k <= n; ++k)
    for (int i = 0; i < mesh.n_nodes(); ++i)
      out << csv::num(k) << ',' << csv::num(k * sc.time.dt) << ','
          << csv::num(i) << ',' << csv::num(mesh.nodes[i].x()) << ','
          << csv::num(mesh.nodes[i].y()) << ',' << csv::num(lift.theta[k][i])
          << ',' << csv::num(lift.theta_t[k][i]) << '\n';
  ensure_dir(out_dir);
  csv::write_file(out_dir + "/lifting.csv", out.str());

  std::ostringstream summary;
  summary << "max_h1,sum_dt_theta_t_sq\n";
  summary << csv::num(lift.max_h1) << ',' << csv::num(lift.sum_dt_theta_t_sq)
          << '\n';
  csv::write_file(out_dir + "/lifting_summary.csv", summary.str());
  std::cout << "lifting " << sc.name << ": max_h1 = " << csv::num(lift.max_h1)
            << ", sum_dt_theta_t_sq = " << csv::num(lift.sum_dt_theta_t_sq)
            << "\n";
  return 0;
}

}  // namespace tvp::cli
