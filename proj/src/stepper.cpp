#include "tvp/stepper.hpp"

#include <cmath>

namespace tvp {

namespace {

double tensor_field_l2(const Mesh2D& mesh, const FieldTensor& v) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e) s += mesh.areas[e] * inner(v[e], v[e]);
  return std::sqrt(s);
}

double tensor_field_l2_diff(const Mesh2D& mesh, const FieldTensor& a,
                            const FieldTensor& b) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e) {
    const SymTensor3 d = a[e] - b[e];
    s += mesh.areas[e] * inner(d, d);
  }
  return std::sqrt(s);
}

}  // namespace

Simulator::Simulator(const Scenario& sc) : sc_(sc) {
  sc_.validate();
  if (!(sc_.material.yosida_lambda > 0.0))
    throw std::invalid_argument(
        "material.yosida_lambda must be positive for time stepping");

  dt_ = sc_.time.dt;
  n_steps_ = sc_.time.n_steps();
  mesh_ = Mesh2D::rectangle(sc_.mesh.nx, sc_.mesh.ny, sc_.mesh.lx, sc_.mesh.ly);

  auto [M, A] = assemble_heat(mesh_);
  M_ = std::move(M);
  A_ = std::move(A);
  K_ = assemble_elasticity(mesh_, sc_.material.elasticity);
  dirichlet_ = std::make_unique<DirichletSolver>(mesh_, K_);

  heat_llt_.compute(SpMat(M_ + dt_ * A_));
  if (heat_llt_.info() != Eigen::Success)
    throw std::runtime_error("heat operator factorization failed");

  std::vector<FieldScalar> g_levels;
  g_levels.reserve(n_steps_ + 1);
  for (int n = 0; n <= n_steps_; ++n)
    g_levels.push_back(nodal_gtheta(mesh_, sc_.g_theta, n * dt_));
  lifting_ = solve_lifting(mesh_, M_, A_, g_levels,
                           nodal_theta0(mesh_, sc_.theta0), dt_);
}

FieldVector Simulator::elem_load(const FieldTensor& field) const {
  FieldVector rhs = FieldVector::Zero(2 * mesh_.n_nodes());
  for (int e = 0; e < mesh_.n_elems(); ++e) {
    const auto& t = mesh_.tris[e];
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 2; ++c)
        rhs[2 * t[a] + c] +=
            mesh_.areas[e] * inner(field[e], basis_strain(mesh_, e, a, c));
  }
  return rhs;
}

FieldVector Simulator::force_load(const Eigen::Vector2d& F) const {
  FieldVector rhs = FieldVector::Zero(2 * mesh_.n_nodes());
  for (int e = 0; e < mesh_.n_elems(); ++e) {
    const auto& t = mesh_.tris[e];
    const double w = mesh_.areas[e] / 3.0;
    for (int a = 0; a < 3; ++a) {
      rhs[2 * t[a]] += w * F.x();
      rhs[2 * t[a] + 1] += w * F.y();
    }
  }
  return rhs;
}

// f(truncate(theta_star + theta_tilde)) at element centroids
FieldScalar Simulator::coupling_coeffs(const FieldScalar& theta_star,
                                       int level) const {
  FieldScalar coeff(mesh_.n_elems());
  const FieldScalar theta_hat = recombine(theta_star, lifting_, level);
  for (int e = 0; e < mesh_.n_elems(); ++e)
    coeff[e] = f_eval(truncate(mesh_.centroid_mean(theta_hat, e),
                               sc_.material.eps_trunc),
                      sc_.material.coupling);
  return coeff;
}

FieldVector Simulator::initial_velocity(const FieldVector& u0,
                                        const FieldTensor& eps_p0,
                                        const FieldScalar& theta_shifted0) const {
  const FieldTensor eps0 = strain_of(mesh_, u0);
  FieldTensor sigma0(mesh_.n_elems());
  const FieldScalar f0 = coupling_coeffs(theta_shifted0, 0);
  for (int e = 0; e < mesh_.n_elems(); ++e) {
    sigma0[e] = sc_.material.elasticity.apply(eps0[e] - eps_p0[e]);
    sigma0[e] -= f0[e] * SymTensor3::identity();
  }
  const FieldVector rhs = force_load(sc_.force.eval(0.0)) - elem_load(sigma0);
  return dirichlet_->solve(1.0, rhs, boundary_gd_rate(mesh_, sc_.g_d, 0.0));
}

SimState Simulator::initial_state() const {
  SimState s;
  s.t = 0.0;
  s.u = nodal_u0(mesh_, sc_.u0);
  s.theta = FieldScalar::Zero(mesh_.n_nodes());
  s.eps_p.assign(mesh_.n_elems(), sc_.epsp0);
  const FieldTensor eps = strain_of(mesh_, s.u);
  s.T.resize(mesh_.n_elems());
  kernels::eval_stress(eps, s.eps_p, sc_.material.elasticity, s.T,
                       sc_.solver.exec);
  s.u_t = initial_velocity(s.u, s.eps_p, s.theta);
  return s;
}

FieldTensor Simulator::epsilon_p_update(const FieldTensor& eps_p_n,
                                        const FieldTensor& strain_star) const {
  FieldTensor out(mesh_.n_elems());
  kernels::integrate_inelastic(eps_p_n, strain_star, sc_.material.elasticity,
                               sc_.material.p, sc_.material.yosida_lambda, dt_,
                               sc_.solver.substeps, out, sc_.solver.exec);
  return out;
}

std::pair<FieldVector, FieldVector> Simulator::elastic_solve(
    const FieldTensor& eps_p, const FieldScalar& theta_star,
    const FieldVector& u_n, int level) const {
  const double t1 = level * dt_;
  const ElasticityTensor& C = sc_.material.elasticity;

  FieldTensor load_field(mesh_.n_elems());
  const FieldScalar f = coupling_coeffs(theta_star, level);
  for (int e = 0; e < mesh_.n_elems(); ++e) {
    load_field[e] = C.apply(eps_p[e]);
    load_field[e] += f[e] * SymTensor3::identity();
  }

  FieldVector rhs = force_load(sc_.force.eval(t1)) + elem_load(load_field);
  rhs += (1.0 / dt_) * (K_ * u_n);

  const double scale = 1.0 + 1.0 / dt_;
  FieldVector u =
      dirichlet_->solve(scale, rhs, boundary_gd(mesh_, sc_.g_d, t1));
  FieldVector u_t = (u - u_n) / dt_;
  return {std::move(u), std::move(u_t)};
}

FieldScalar Simulator::heat_solve(const FieldScalar& theta_n,
                                  const FieldTensor& T_new,
                                  const FieldTensor& eps_p_rate,
                                  const FieldVector& u_t,
                                  const FieldScalar& theta_star,
                                  int level) const {
  const FieldScalar f = coupling_coeffs(theta_star, level);
  const FieldTensor eps_ut = strain_of(mesh_, u_t);

  FieldScalar b = FieldScalar::Zero(mesh_.n_nodes());
  for (int e = 0; e < mesh_.n_elems(); ++e) {
    const double src =
        truncate(inner(dev(T_new[e]), eps_p_rate[e]), sc_.material.eps_trunc);
    const double cpl = f[e] * eps_ut[e].trace();
    const double w = mesh_.areas[e] / 3.0 * (src - cpl);
    const auto& t = mesh_.tris[e];
    b[t[0]] += w;
    b[t[1]] += w;
    b[t[2]] += w;
  }
  return heat_llt_.solve(M_ * theta_n + dt_ * b);
}

InnerSolution Simulator::picard_P(const FieldScalar& theta_star,
                                  const SimState& from, int level,
                                  const FieldTensor* strain_star_init) const {
  InnerSolution sol;
  FieldTensor strain_star =
      strain_star_init ? *strain_star_init : strain_of(mesh_, from.u);

  double prev_delta = -1.0;
  for (int j = 1; j <= sc_.solver.picard_max; ++j) {
    sol.eps_p = epsilon_p_update(from.eps_p, strain_star);
    auto [u, u_t] = elastic_solve(sol.eps_p, theta_star, from.u, level);
    FieldTensor strain_new = strain_of(mesh_, u);

    const double delta = tensor_field_l2_diff(mesh_, strain_new, strain_star);
    sol.residual = delta / (1.0 + tensor_field_l2(mesh_, strain_star));
    sol.iters = j;
    if (j > 1 && prev_delta > 0.0)
      sol.contraction = std::max(sol.contraction, delta / prev_delta);
    prev_delta = delta;

    sol.u = std::move(u);
    sol.u_t = std::move(u_t);
    sol.strain = std::move(strain_new);
    if (sol.residual < sc_.solver.picard_tol) return sol;
    strain_star = sol.strain;
  }
  throw StepFailure(
      "picard_P failed to converge within solver.picard_max iterations; "
      "reduce time.dt or raise solver.picard_max");
}

std::pair<SimState, StepReport> Simulator::step(
    const SimState& from, int level, const FieldScalar* theta_star_init) const {
  StepReport rep;
  FieldScalar theta_star = theta_star_init ? *theta_star_init : from.theta;

  const FieldTensor* warm_start = nullptr;
  InnerSolution inner;
  FieldScalar theta_next;
  FieldTensor T_new(mesh_.n_elems());
  FieldTensor rate(mesh_.n_elems());

  double prev_delta = -1.0;
  for (int j = 1; j <= sc_.solver.picard_max; ++j) {
    inner = picard_P(theta_star, from, level, warm_start);
    warm_start = &inner.strain;
    rep.p_iters_total += inner.iters;
    rep.contraction_P = std::max(rep.contraction_P, inner.contraction);
    rep.residual_P = inner.residual;

    kernels::eval_stress(inner.strain, inner.eps_p, sc_.material.elasticity,
                         T_new, sc_.solver.exec);
    for (int e = 0; e < mesh_.n_elems(); ++e)
      rate[e] = (1.0 / dt_) * (inner.eps_p[e] - from.eps_p[e]);

    theta_next =
        heat_solve(from.theta, T_new, rate, inner.u_t, theta_star, level);

    const FieldScalar diff = theta_next - theta_star;
    const double delta = std::sqrt(diff.dot(M_ * diff));
    rep.residual_R = delta / (1.0 + std::sqrt(theta_star.dot(M_ * theta_star)));
    rep.r_iters = j;
    if (j > 1 && prev_delta > 0.0)
      rep.contraction_R = std::max(rep.contraction_R, delta / prev_delta);
    prev_delta = delta;

    if (rep.residual_R < sc_.solver.picard_tol) {
      SimState next;
      next.t = level * dt_;
      next.u = std::move(inner.u);
      next.u_t = std::move(inner.u_t);
      next.theta = std::move(theta_next);
      next.eps_p = std::move(inner.eps_p);
      next.T = std::move(T_new);
      return {std::move(next), rep};
    }
    theta_star = theta_next;
  }
  throw StepFailure(
      "picard_R failed to converge within solver.picard_max iterations; "
      "reduce time.dt or raise solver.picard_max");
}

RunResult run(const Simulator& sim) {
  const Mesh2D& mesh = sim.mesh();
  const Scenario& sc = sim.scenario();
  const double dt = sim.dt();
  const double lambda = sc.material.yosida_lambda;

  RunResult out;
  out.diag.lifting_max_h1 = sim.lifting().max_h1;
  out.diag.lifting_sum_dt_theta_t_sq = sim.lifting().sum_dt_theta_t_sq;

  auto flow_residual = [&](const FieldTensor& T) {
    double worst = 0.0;
    for (int e = 0; e < mesh.n_elems(); ++e) {
      const SymTensor3 z = dev(T[e]);
      const SymTensor3 yg = yosida_grad(z, lambda, sc.material.p);
      const SymTensor3 fr = flow_rule(resolvent(z, lambda, sc.material.p),
                                      sc.material.p);
      const double gap = norm(yg - fr) / (1e-30 + norm(yg) + norm(fr));
      worst = std::max(worst, gap);
    }
    return worst;
  };
  auto eps_ut_sq = [&](const FieldVector& u_t) {
    const FieldTensor eut = strain_of(mesh, u_t);
    double s = 0.0;
    for (int e = 0; e < mesh.n_elems(); ++e)
      s += mesh.areas[e] * inner(eut[e], eut[e]);
    return s;
  };
  auto push_row = [&](const SimState& st, int level, const StepReport* rep,
                      double min_diss) {
    StepRow row;
    row.t = st.t;
    const FieldScalar theta_hat = recombine(st.theta, sim.lifting(), level);
    row.E_thermal = thermal_energy(mesh, theta_hat);
    row.E_elastic = elastic_energy(mesh, sc.material.elasticity, st.T);
    row.E_total = row.E_thermal + row.E_elastic;
    row.min_dissipation = min_diss;
    row.norm_T = field_l2(mesh, st.T);
    row.norm_eps_ut_sq = eps_ut_sq(st.u_t);
    if (rep) {
      row.picard_R_iters = rep->r_iters;
      row.picard_P_iters_total = rep->p_iters_total;
      row.contraction_R = rep->contraction_R;
      row.contraction_P = rep->contraction_P;
    }
    out.diag.rows.push_back(row);
    out.diag.sup_norm_T = std::max(out.diag.sup_norm_T, row.norm_T);
    out.diag.max_flow_residual =
        std::max(out.diag.max_flow_residual, flow_residual(st.T));
  };

  out.trajectory.push_back(sim.initial_state());
  push_row(out.trajectory.front(), 0, nullptr, 0.0);

  for (int level = 1; level <= sim.n_steps(); ++level) {
    const SimState& prev = out.trajectory.back();
    SimState next;
    StepReport rep;
    try {
      std::tie(next, rep) = sim.step(prev, level);
    } catch (const StepFailure& err) {
      out.failed = true;
      out.failure = err.what();
      out.failed_level = level;
      break;
    }

    FieldTensor rate(mesh.n_elems());
    double tt_sq = 0.0, res_sq = 0.0;
    for (int e = 0; e < mesh.n_elems(); ++e) {
      rate[e] = (1.0 / dt) * (next.eps_p[e] - prev.eps_p[e]);
      const SymTensor3 dT = (1.0 / dt) * (next.T[e] - prev.T[e]);
      tt_sq += mesh.areas[e] * inner(dT, dT);
      const SymTensor3 yg = yosida_grad(dev(next.T[e]), lambda, sc.material.p);
      res_sq += mesh.areas[e] * inner(yg, yg);
    }
    out.diag.sum_dt_norm_Tt_sq += dt * tt_sq;
    out.diag.resolvent_metric += lambda * dt * res_sq;

    push_row(next, level, &rep, dissipation_min(mesh, next.T, rate));
    out.diag.sum_dt_norm_eps_ut_sq += dt * out.diag.rows.back().norm_eps_ut_sq;
    out.rates.push_back(std::move(rate));
    out.trajectory.push_back(std::move(next));
  }
  return out;
}

RunResult run(const Scenario& sc) { return run(Simulator(sc)); }

}  // namespace tvp
