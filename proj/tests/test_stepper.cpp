#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tvp/fields.hpp"
#include "tvp/stepper.hpp"

using namespace tvp;

namespace {

// small, fast baseline: clamped affine boundary, no external work after t=0
const char* kRelaxText = R"(
mesh.nx = 4
mesh.ny = 4
mesh.lx = 1.0
mesh.ly = 1.0
time.t_final = 0.2
time.dt = 0.02
material.p = 3.0
material.eps_trunc = 5.0
material.yosida_lambda = 0.01
material.lame_lambda = 1.0
material.lame_mu = 1.0
coupling.kind = zero
solver.picard_tol = 1e-10
solver.picard_max = 50
solver.substeps = 8
bc.gd.kind = affine
bc.gd.axx = 0.3
bc.gd.axy = 0.1
bc.gd.ayx = 0.1
bc.gd.ayy = -0.2
bc.gtheta.kind = zero
force.kind = zero
init.u0.kind = affine
init.u0.axx = 0.3
init.u0.axy = 0.1
init.u0.ayx = 0.1
init.u0.ayy = -0.2
init.theta0.kind = zero
init.epsp0.kind = zero
)";

// driven scenario with thermal feedback (linear coupling, ramped clamp)
const char* kDrivenText = R"(
mesh.nx = 4
mesh.ny = 4
mesh.lx = 1.0
mesh.ly = 1.0
time.t_final = 0.2
time.dt = 0.02
material.p = 3.0
material.eps_trunc = 1.0
material.yosida_lambda = 0.01
material.lame_lambda = 1.0
material.lame_mu = 1.0
coupling.kind = linear
coupling.alpha = 0.1
solver.picard_tol = 1e-10
solver.picard_max = 50
solver.substeps = 8
bc.gd.kind = ramp
bc.gd.axx = 0.4
bc.gd.axy = 0.0
bc.gd.ayx = 0.0
bc.gd.ayy = -0.2
bc.gtheta.kind = constant
bc.gtheta.c = 0.1
force.kind = zero
init.u0.kind = zero
init.theta0.kind = constant
init.theta0.c = 0.2
init.epsp0.kind = zero
)";

Scenario make(const char* text, const std::string& name) {
  return parse_scenario(text, name);
}

double max_abs(const FieldVector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("stepper") {

TEST_CASE("all-zero data produce the identically zero trajectory") {
  const char* text = R"(
mesh.nx = 3
mesh.ny = 3
mesh.lx = 1.0
mesh.ly = 1.0
time.t_final = 0.5
time.dt = 0.1
material.p = 3.0
material.eps_trunc = 1.0
material.yosida_lambda = 0.05
material.lame_lambda = 1.0
material.lame_mu = 1.0
coupling.kind = zero
solver.substeps = 16
bc.gd.kind = zero
bc.gtheta.kind = zero
force.kind = zero
init.u0.kind = zero
init.theta0.kind = zero
init.epsp0.kind = zero
)";
  const RunResult rr = run(make(text, "zero"));
  REQUIRE(!rr.failed);
  REQUIRE(rr.trajectory.size() == 6);
  for (const auto& st : rr.trajectory) {
    CHECK(max_abs(st.u) == 0.0);
    CHECK(max_abs(st.u_t) == 0.0);
    CHECK(max_abs(st.theta) <= 1e-15);
    for (const auto& e : st.eps_p) CHECK(norm(e) == 0.0);
    for (const auto& e : st.T) CHECK(norm(e) == 0.0);
  }
  for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
    CHECK(rr.diag.rows[n].picard_R_iters == 1);       // zero state terminates at once
    CHECK(rr.diag.rows[n].picard_P_iters_total == 1);
    CHECK(rr.diag.rows[n].E_total == 0.0);
  }
}

TEST_CASE("initial velocity equals the boundary translation rate") {
  // ramped rigid translation: g_D(x, t) = t * b, interior residual zero
  const char* text = R"(
mesh.nx = 4
mesh.ny = 4
mesh.lx = 1.0
mesh.ly = 1.0
time.t_final = 0.1
time.dt = 0.02
material.p = 3.0
material.eps_trunc = 1.0
material.yosida_lambda = 0.05
material.lame_lambda = 1.0
material.lame_mu = 1.0
coupling.kind = zero
solver.substeps = 16
bc.gd.kind = ramp
bc.gd.bx = 0.3
bc.gd.by = -0.1
bc.gtheta.kind = zero
force.kind = zero
init.u0.kind = zero
init.theta0.kind = zero
init.epsp0.kind = zero
)";
  const Simulator sim(make(text, "translate"));
  const SimState s0 = sim.initial_state();
  for (int n = 0; n < sim.mesh().n_nodes(); ++n) {
    CHECK(s0.u_t[2 * n] == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(s0.u_t[2 * n + 1] == doctest::Approx(-0.1).epsilon(1e-10));
  }
}

TEST_CASE("initial velocity vanishes under a steady clamp with constant stress") {
  const Simulator sim(make(kRelaxText, "relax"));
  const SimState s0 = sim.initial_state();
  // u0 affine -> constant stress -> zero interior residual; boundary rate 0
  CHECK(max_abs(s0.u_t) <= 1e-10);
  CHECK(max_abs(s0.theta) == 0.0);
  CHECK(s0.t == 0.0);
}

TEST_CASE("steady affine clamp is reproduced exactly by the elastic solve") {
  const Simulator sim(make(kRelaxText, "relax"));
  const Mesh2D& m = sim.mesh();
  Eigen::Matrix2d A;
  A << 0.3, 0.1, 0.1, -0.2;
  FieldVector expect(2 * m.n_nodes());
  for (int n = 0; n < m.n_nodes(); ++n) {
    const Eigen::Vector2d x = A * m.nodes[n];
    expect[2 * n] = x[0];
    expect[2 * n + 1] = x[1];
  }
  const FieldTensor eps_p(m.n_elems(), SymTensor3{});
  const FieldScalar theta = FieldScalar::Zero(m.n_nodes());
  const auto [u, u_t] = sim.elastic_solve(eps_p, theta, expect, 1);
  CHECK(max_abs(u - expect) <= 1e-10);
  CHECK(max_abs(u_t) <= 1e-9);
}

TEST_CASE("the thermal term loads like an elementwise hydrostatic pre-stress") {
  // Path A: coupling off, inelastic strain C^{-1}(f_e 1) per element.
  // Path B: linear coupling alpha with a spatially varying temperature, zero
  // inelastic strain.  Both produce stress C eps(u) - f_e 1, so the solves
  // must agree; the x-gradient of the pressure makes the field nontrivial.
  const double alpha = 0.3;

  std::string text_a(kRelaxText);
  // swap the clamp for zero data so only the element loads drive u
  auto patch = [](std::string s, const std::string& from, const std::string& to) {
    return s.replace(s.find(from), from.size(), to);
  };
  text_a = patch(text_a, "bc.gd.kind = affine", "bc.gd.kind = zero");
  text_a = patch(text_a, "init.u0.kind = affine", "init.u0.kind = zero");
  // clip level 1/eps_trunc = 1 leaves the sampled temperatures untouched
  text_a = patch(text_a, "material.eps_trunc = 5.0", "material.eps_trunc = 1.0");
  // strip the now-unknown affine keys
  std::string cleaned;
  for (size_t pos = 0; pos < text_a.size();) {
    const size_t end = text_a.find('\n', pos);
    const std::string line = text_a.substr(pos, end - pos);
    if (line.find(".axx") == std::string::npos &&
        line.find(".axy") == std::string::npos &&
        line.find(".ayx") == std::string::npos &&
        line.find(".ayy") == std::string::npos)
      cleaned += line + "\n";
    pos = end + 1;
  }

  const Simulator sim_a(make(cleaned.c_str(), "path_a"));
  const Mesh2D& m = sim_a.mesh();
  const ElasticityTensor C(1.0, 1.0);
  const FieldVector zero_u = FieldVector::Zero(2 * m.n_nodes());
  const FieldScalar zero_th = FieldScalar::Zero(m.n_nodes());

  // temperature theta(x) = 0.2 + 0.5 x, inside the clip window everywhere
  FieldScalar th(m.n_nodes());
  for (int i = 0; i < m.n_nodes(); ++i) th[i] = 0.2 + 0.5 * m.nodes[i].x();

  FieldTensor pre(m.n_elems());
  for (int e = 0; e < m.n_elems(); ++e)
    pre[e] = C.apply_inv(alpha * m.centroid_mean(th, e) * SymTensor3::identity());
  const FieldVector u_a = sim_a.elastic_solve(pre, zero_th, zero_u, 1).first;

  std::string text_b = patch(cleaned, "coupling.kind = zero",
                             "coupling.kind = linear\ncoupling.alpha = 0.3");
  const Simulator sim_b(make(text_b.c_str(), "path_b"));
  const FieldTensor no_pre(m.n_elems(), SymTensor3{});
  const FieldVector u_b = sim_b.elastic_solve(no_pre, th, zero_u, 1).first;

  CHECK(max_abs(u_a - u_b) <= 1e-12);
  CHECK(max_abs(u_a) > 1e-6);  // the pressure gradient deforms the interior
}

TEST_CASE("a uniform temperature under zero clamps is a stationary state") {
  // Spatially constant pressure has zero divergence, so with homogeneous
  // Dirichlet data nothing moves: u stays 0, the stress is the pure
  // hydrostatic shift -f(theta) 1, its deviator vanishes, no flow happens,
  // and the temperature never changes.
  std::string text(kRelaxText);
  auto patch = [](std::string s, const std::string& from, const std::string& to) {
    return s.replace(s.find(from), from.size(), to);
  };
  text = patch(text, "bc.gd.kind = affine", "bc.gd.kind = zero");
  text = patch(text, "init.u0.kind = affine", "init.u0.kind = zero");
  text = patch(text, "material.eps_trunc = 5.0", "material.eps_trunc = 1.0");
  text = patch(text, "coupling.kind = zero",
               "coupling.kind = linear\ncoupling.alpha = 0.3");
  text = patch(text, "init.theta0.kind = zero",
               "init.theta0.kind = constant\ninit.theta0.c = 1.0");
  std::string cleaned;
  for (size_t pos = 0; pos < text.size();) {
    const size_t end = text.find('\n', pos);
    const std::string line = text.substr(pos, end - pos);
    if (line.find(".axx") == std::string::npos &&
        line.find(".axy") == std::string::npos &&
        line.find(".ayx") == std::string::npos &&
        line.find(".ayy") == std::string::npos)
      cleaned += line + "\n";
    pos = end + 1;
  }

  const Simulator sim(make(cleaned.c_str(), "stationary"));
  const RunResult rr = run(sim);
  REQUIRE(!rr.failed);
  for (size_t n = 0; n < rr.trajectory.size(); ++n) {
    const SimState& st = rr.trajectory[n];
    // stored fields: u, the shifted temperature, and the elastic stress all
    // stay at zero; the thermal pressure lives in the loads, not in T
    CHECK(max_abs(st.u) <= 1e-12);
    CHECK(st.theta.cwiseAbs().maxCoeff() <= 1e-12);
    for (const auto& e : st.eps_p) CHECK(norm(e) <= 1e-12);
    for (const auto& e : st.T) CHECK(norm(e) <= 1e-12);
    // the physical temperature rides the lifting series and stays at 1
    const FieldScalar theta_hat =
        recombine(st.theta, sim.lifting(), static_cast<int>(n));
    CHECK((theta_hat.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  for (const auto& row : rr.diag.rows) {
    CHECK(row.E_thermal == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.E_elastic <= 1e-20);
  }
}

TEST_CASE("deviatoric stress relaxes monotonically under a fixed clamp") {
  const RunResult rr = run(make(kRelaxText, "relax"));
  REQUIRE(!rr.failed);
  const int n_elems = static_cast<int>(rr.trajectory[0].T.size());
  for (int e = 0; e < n_elems; ++e) {
    double prev = norm(dev(rr.trajectory[0].T[e]));
    CHECK(prev > 0.0);
    for (size_t n = 1; n < rr.trajectory.size(); ++n) {
      const double cur = norm(dev(rr.trajectory[n].T[e]));
      CHECK(cur < prev);  // strictly decreasing while the deviator is nonzero
      prev = cur;
    }
  }
}

TEST_CASE("without thermal feedback the outer loop needs exactly two passes") {
  const RunResult rr = run(make(kRelaxText, "relax"));
  REQUIRE(!rr.failed);
  for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
    CHECK(rr.diag.rows[n].picard_R_iters == 2);
    // heating really happens, so the first pass cannot be the fixed point
    CHECK(rr.diag.rows[n].E_thermal > 0.0);
  }
}

TEST_CASE("energy ledger: total energy never increases in a closed scenario") {
  const Scenario sc = make(kRelaxText, "relax");
  REQUIRE(sc.closed());
  const RunResult rr = run(sc);
  REQUIRE(!rr.failed);
  const double E0 = rr.diag.rows[0].E_total;
  CHECK(E0 > 0.0);
  double prev = E0;
  for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
    CHECK(rr.diag.rows[n].E_total <= prev + 1e-8 * E0);
    CHECK(rr.diag.rows[n].min_dissipation >= -1e-12);
    prev = rr.diag.rows[n].E_total;
  }
}

TEST_CASE("accepted states satisfy the cache and tracelessness invariants") {
  const Scenario sc = make(kDrivenText, "driven");
  const Simulator sim(sc);
  const RunResult rr = run(sim);
  REQUIRE(!rr.failed);
  const Mesh2D& m = sim.mesh();
  for (const auto& st : rr.trajectory) {
    const FieldTensor eps = strain_of(m, st.u);
    for (int e = 0; e < m.n_elems(); ++e) {
      CHECK(std::abs(st.eps_p[e].trace()) <= 1e-10);
      const SymTensor3 want =
          sc.material.elasticity.apply(eps[e] - st.eps_p[e]);
      CHECK(norm(st.T[e] - want) <= 1e-10 * (1.0 + norm(want)));
    }
  }
  CHECK(rr.diag.max_flow_residual <= 1e-10);
  for (size_t n = 1; n < rr.diag.rows.size(); ++n) {
    CHECK(rr.diag.rows[n].contraction_P < 1.0);
    CHECK(rr.diag.rows[n].contraction_R < 1.0);
    CHECK(rr.diag.rows[n].min_dissipation >= -1e-12);
    CHECK(rr.diag.rows[n].picard_R_iters <= sc.solver.picard_max);
  }
}

TEST_CASE("distinct initial guesses reach the same fixed points") {
  const Scenario sc = make(kDrivenText, "driven");
  const Simulator sim(sc);
  const SimState s0 = sim.initial_state();
  auto [s1, rep1] = sim.step(s0, 1);

  // Both comparisons use the same area-weighted metrics the solver's own
  // termination tests use.
  const Mesh2D& m = sim.mesh();
  auto strain_gap = [&](const FieldTensor& a, const FieldTensor& b) {
    double s = 0.0;
    for (int e = 0; e < m.n_elems(); ++e) {
      const SymTensor3 d = a[e] - b[e];
      s += m.areas[e] * inner(d, d);
    }
    return std::sqrt(s);
  };

  // inner loop: default strain seed vs zero strain seed
  const InnerSolution a = sim.picard_P(s1.theta, s1, 2);
  const FieldTensor zero_strain(m.n_elems(), SymTensor3{});
  const InnerSolution b = sim.picard_P(s1.theta, s1, 2, &zero_strain);
  CHECK(strain_gap(a.strain, b.strain) <= 10.0 * sc.solver.picard_tol);

  // outer loop: theta_n seed vs zero seed
  auto [sa, ra] = sim.step(s1, 2);
  const FieldScalar zero_theta = FieldScalar::Zero(m.n_nodes());
  auto [sb, rb] = sim.step(s1, 2, &zero_theta);
  const FieldScalar dth = sa.theta - sb.theta;
  CHECK(std::sqrt(dth.dot(sim.mass() * dth)) <= 10.0 * sc.solver.picard_tol);
  CHECK(strain_gap(strain_of(m, sa.u), strain_of(m, sb.u)) <=
        10.0 * sc.solver.picard_tol);
}

TEST_CASE("inner contraction ratio shrinks when the step is halved") {
  const Scenario coarse = make(kDrivenText, "driven");
  Scenario fine = coarse;
  fine.time.dt = coarse.time.dt / 2.0;
  auto worst_ratio = [](const RunResult& rr) {
    double w = 0.0;
    for (const auto& row : rr.diag.rows) w = std::max(w, row.contraction_P);
    return w;
  };
  const RunResult rc = run(coarse);
  const RunResult rf = run(fine);
  REQUIRE(!rc.failed);
  REQUIRE(!rf.failed);
  CHECK(worst_ratio(rc) > 0.0);
  CHECK(worst_ratio(rf) < worst_ratio(rc));
}

TEST_CASE("heat update with clipped sources has bounded max-norm growth") {
  const Scenario sc = make(kDrivenText, "driven");
  const Simulator sim(sc);
  const Mesh2D& m = sim.mesh();
  std::mt19937_64 rng(401);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double bound = sc.time.dt / sc.material.eps_trunc;
  for (int trial = 0; trial < 20; ++trial) {
    FieldScalar theta_n(m.n_nodes());
    for (int n = 0; n < m.n_nodes(); ++n) theta_n[n] = u(rng);
    FieldTensor T_new(m.n_elems()), rate(m.n_elems());
    for (int e = 0; e < m.n_elems(); ++e) {
      // large products so the truncation genuinely clips
      T_new[e] = SymTensor3{5 * u(rng), 5 * u(rng), 5 * u(rng),
                            5 * u(rng), 5 * u(rng), 5 * u(rng)};
      rate[e] = dev(SymTensor3{5 * u(rng), 5 * u(rng), 5 * u(rng),
                               5 * u(rng), 5 * u(rng), 5 * u(rng)});
    }
    const FieldVector u_t = FieldVector::Zero(2 * m.n_nodes());
    const FieldScalar theta_star = FieldScalar::Zero(m.n_nodes());
    const FieldScalar theta_next =
        sim.heat_solve(theta_n, T_new, rate, u_t, theta_star, 1);
    // P1 consistent-mass implicit Euler is not a strict max principle, so a
    // 25% headroom constant covers the mild overshoot of the discrete kernel
    CHECK(theta_next.cwiseAbs().maxCoeff() <=
          1.25 * (theta_n.cwiseAbs().maxCoeff() + bound));
  }
}

TEST_CASE("uniform unit source grows the mean temperature by dt per step") {
  const Scenario sc = make(kRelaxText, "relax");
  const Simulator sim(sc);
  const Mesh2D& m = sim.mesh();
  // craft T and rate with dev(T) : rate = 0.1 on every element, safely below
  // the clip level 1/eps_trunc = 0.2 of this scenario
  const double src = 0.1;
  FieldTensor T_new(m.n_elems(), SymTensor3::diag(2.0, -1.0, -1.0));  // |dev|^2=6
  FieldTensor rate(m.n_elems(), (src / 6.0) * SymTensor3::diag(2.0, -1.0, -1.0));
  const FieldVector u_t = FieldVector::Zero(2 * m.n_nodes());
  const FieldScalar zero = FieldScalar::Zero(m.n_nodes());
  const FieldScalar ones = FieldScalar::Ones(m.n_nodes());
  const FieldScalar theta1 = sim.heat_solve(zero, T_new, rate, u_t, zero, 1);
  // integrate the weak form against 1: the mean grows at exactly the source rate
  const double mass1 = ones.dot(sim.mass() * theta1);
  CHECK(mass1 == doctest::Approx(src * sc.time.dt * m.domain_area()).epsilon(1e-12));
  // and a constant field with zero sources stays put
  const FieldScalar five = FieldScalar::Constant(m.n_nodes(), 5.0);
  const FieldTensor no_rate(m.n_elems(), SymTensor3{});
  const FieldScalar kept = sim.heat_solve(five, T_new, no_rate, u_t, zero, 1);
  CHECK((kept - five).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exhausted iteration budgets fail loudly and keep the prefix") {
  Scenario sc = make(kDrivenText, "driven");
  sc.solver.picard_max = 1;
  const Simulator sim(sc);
  CHECK_THROWS_AS(sim.step(sim.initial_state(), 1), StepFailure);

  const RunResult rr = run(sim);
  CHECK(rr.failed);
  CHECK(rr.failed_level == 1);
  CHECK(rr.trajectory.size() == 1);  // the initial state survives
  CHECK(rr.failure.find("picard") != std::string::npos);
}

TEST_CASE("the simulator requires a positive regularization parameter") {
  Scenario sc = make(kRelaxText, "relax");
  sc.material.yosida_lambda = 0.0;
  CHECK_THROWS_WITH_AS(Simulator{sc},
                       "material.yosida_lambda must be positive for time stepping",
                       std::invalid_argument);
}

}  // TEST_SUITE
