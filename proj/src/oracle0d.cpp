#include "tvp/oracle0d.hpp"

#include <cmath>
#include <stdexcept>

#include "tvp/stepper.hpp"

namespace tvp {

SymTensor3 oracle_strain(const OracleSpec& spec, double t) {
  switch (spec.history) {
    case OracleHistory::Ramp: return t * spec.amplitude;
    case OracleHistory::Hold: return spec.amplitude;
    case OracleHistory::Sinusoid: return std::sin(spec.omega * t) * spec.amplitude;
  }
  return {};
}

SymTensor3 oracle_strain_rate(const OracleSpec& spec, double t) {
  switch (spec.history) {
    case OracleHistory::Ramp: return spec.amplitude;
    case OracleHistory::Hold: return {};
    case OracleHistory::Sinusoid:
      return (spec.omega * std::cos(spec.omega * t)) * spec.amplitude;
  }
  return {};
}

namespace {

struct OdeState {
  SymTensor3 eps_p;
  double theta;
};

OdeState axpy(const OdeState& y, double a, const OdeState& d) {
  return {y.eps_p + a * d.eps_p, y.theta + a * d.theta};
}

std::vector<OracleState> integrate_grid(const MaterialParams& mat,
                                        const OracleSpec& spec, double t_final,
                                        double theta_init,
                                        const SymTensor3& eps_p_init,
                                        int n_steps) {
  const double p = mat.p;
  const double lambda = mat.yosida_lambda;
  const ElasticityTensor& C = mat.elasticity;

  auto plastic_rate = [&](const SymTensor3& t_dev) {
    return lambda > 0.0 ? yosida_grad(t_dev, lambda, p) : flow_rule(t_dev, p);
  };
  auto deriv = [&](double t, const OdeState& y) {
    const SymTensor3 T = C.apply(oracle_strain(spec, t) - y.eps_p);
    const SymTensor3 rate = plastic_rate(dev(T));
    const double src = truncate(inner(dev(T), rate), mat.eps_trunc);
    const double cpl = f_eval(truncate(y.theta, mat.eps_trunc), mat.coupling) *
                       oracle_strain_rate(spec, t).trace();
    return OdeState{rate, src - cpl};
  };

  const double h = t_final / n_steps;
  std::vector<OracleState> out;
  out.reserve(n_steps + 1);

  OdeState y{eps_p_init, theta_init};
  auto record = [&](int n) {
    OracleState s;
    s.t = n * h;
    s.eps = oracle_strain(spec, s.t);
    s.eps_p = y.eps_p;
    s.T = C.apply(s.eps - y.eps_p);
    s.theta = y.theta;
    out.push_back(s);
  };
  record(0);

  for (int n = 0; n < n_steps; ++n) {
    const double t = n * h;
    const OdeState k1 = deriv(t, y);
    const OdeState k2 = deriv(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const OdeState k3 = deriv(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const OdeState k4 = deriv(t + h, axpy(y, h, k3));
    y.eps_p += (h / 6.0) * (k1.eps_p + 2.0 * k2.eps_p + 2.0 * k3.eps_p + k4.eps_p);
    y.theta += (h / 6.0) * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    record(n + 1);
  }
  return out;
}

}  // namespace

OracleTrajectory integrate_oracle(const MaterialParams& mat,
                                  const OracleSpec& spec, double t_final,
                                  double theta_init, const SymTensor3& eps_p_init,
                                  bool with_richardson) {
  if (!(t_final > 0.0))
    throw std::invalid_argument("integrate_oracle: t_final must be positive");
  if (spec.n_steps < 1)
    throw std::invalid_argument("oracle.n_steps must be at least 1");
  mat.validate();

  OracleTrajectory out;
  out.t_final = t_final;
  out.n_steps = spec.n_steps;
  out.states = integrate_grid(mat, spec, t_final, theta_init, eps_p_init,
                              spec.n_steps);

  if (with_richardson) {
    const auto fine = integrate_grid(mat, spec, t_final, theta_init, eps_p_init,
                                     2 * spec.n_steps);
    double worst = 0.0;
    for (size_t n = 0; n < out.states.size(); ++n) {
      const OracleState& a = out.states[n];
      const OracleState& b = fine[2 * n];
      worst = std::max(worst, norm(a.eps_p - b.eps_p) + std::abs(a.theta - b.theta));
    }
    out.richardson_error = worst;
  }
  return out;
}

//======================================================================
// stepper comparison
//======================================================================

namespace {

void require_homogeneous(const Scenario& sc) {
  if (sc.mesh.nx != 1 || sc.mesh.ny != 1)
    throw std::invalid_argument(
        "oracle comparison requires a single-cell mesh (mesh.nx = mesh.ny = 1)");
  if (!sc.homogeneous())
    throw std::invalid_argument(
        "oracle comparison requires spatially homogeneous data: zero force, "
        "zero bc.gtheta, and spatially constant init.theta0");
}

// Strain history induced by the affine boundary motion.
OracleSpec spec_from_gd(const Scenario& sc) {
  OracleSpec spec = sc.oracle;
  const Eigen::Matrix2d S = 0.5 * (sc.g_d.A + sc.g_d.A.transpose());
  spec.amplitude = embed2d(S(0, 0), S(1, 1), S(0, 1));
  spec.omega = sc.g_d.omega;
  switch (sc.g_d.shape) {
    case TimeShape::Zero:
      spec.history = OracleHistory::Hold;
      spec.amplitude = {};
      break;
    case TimeShape::Constant: spec.history = OracleHistory::Hold; break;
    case TimeShape::Ramp: spec.history = OracleHistory::Ramp; break;
    case TimeShape::Sinusoid: spec.history = OracleHistory::Sinusoid; break;
  }
  return spec;
}

double state_gap(const SimState& st, const FieldScalar& theta_hat,
                 const OracleState& ref) {
  double err = 0.0;
  for (const SymTensor3& ep : st.eps_p) err = std::max(err, norm(ep - ref.eps_p));
  for (const SymTensor3& T : st.T) err = std::max(err, norm(T - ref.T));
  for (Eigen::Index i = 0; i < theta_hat.size(); ++i)
    err = std::max(err, std::abs(theta_hat[i] - ref.theta));
  return err;
}

}  // namespace

std::vector<CompareRow> compare_with_stepper(const Scenario& sc, int n_halvings) {
  require_homogeneous(sc);
  if (n_halvings < 0)
    throw std::invalid_argument("compare_with_stepper: n_halvings must be >= 0");

  const int n_base = sc.time.n_steps();
  const int n_finest = n_base << n_halvings;

  // one fine oracle grid whose samples align with every stepper grid
  OracleSpec spec = spec_from_gd(sc);
  spec.n_steps = ((spec.n_steps + n_finest - 1) / n_finest) * n_finest;
  const OracleTrajectory ref = integrate_oracle(
      sc.material, spec, sc.time.t_final, sc.theta0.c, sc.epsp0);

  std::vector<CompareRow> rows;
  for (int k = 0; k <= n_halvings; ++k) {
    Scenario variant = sc;
    variant.time.dt = sc.time.dt / (1 << k);
    const Simulator sim(variant);
    const RunResult rr = run(sim);
    if (rr.failed)
      throw std::runtime_error("oracle comparison run failed: " + rr.failure);

    const int n_levels = variant.time.n_steps();
    const int stride = spec.n_steps / n_levels;
    double err = 0.0;
    for (int n = 0; n <= n_levels; ++n) {
      const FieldScalar theta_hat =
          recombine(rr.trajectory[n].theta, sim.lifting(), n);
      err = std::max(err,
                     state_gap(rr.trajectory[n], theta_hat, ref.states[n * stride]));
    }
    rows.push_back({variant.time.dt, err});
  }
  return rows;
}

std::vector<LambdaGapRow> lambda_gap(const Scenario& sc,
                                     const std::vector<double>& lambdas) {
  require_homogeneous(sc);
  if (lambdas.empty())
    throw std::invalid_argument("lambda_gap requires at least one lambda");

  const int n_base = sc.time.n_steps();
  OracleSpec spec = spec_from_gd(sc);
  spec.n_steps = ((spec.n_steps + n_base - 1) / n_base) * n_base;

  MaterialParams exact = sc.material;
  exact.yosida_lambda = 0.0;
  const OracleTrajectory ref =
      integrate_oracle(exact, spec, sc.time.t_final, sc.theta0.c, sc.epsp0);
  const int stride = spec.n_steps / n_base;

  std::vector<LambdaGapRow> rows;
  for (double lambda : lambdas) {
    Scenario variant = sc;
    variant.material.yosida_lambda = lambda;
    const Simulator sim(variant);
    const RunResult rr = run(sim);
    if (rr.failed)
      throw std::runtime_error("lambda-gap run failed: " + rr.failure);
    double err = 0.0;
    for (int n = 0; n <= n_base; ++n) {
      const FieldScalar theta_hat =
          recombine(rr.trajectory[n].theta, sim.lifting(), n);
      err = std::max(err,
                     state_gap(rr.trajectory[n], theta_hat, ref.states[n * stride]));
    }
    rows.push_back({lambda, err});
  }
  return rows;
}

}  // namespace tvp
