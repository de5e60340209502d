#include "tvp/lifting.hpp"

#include <cmath>
#include <stdexcept>

namespace tvp {

LiftingSeries solve_lifting(const Mesh2D& mesh, const SpMat& M, const SpMat& A,
                            std::span<const FieldScalar> g_levels,
                            const FieldScalar& theta0, double dt) {
  if (g_levels.empty())
    throw std::invalid_argument("solve_lifting: need at least the initial level");
  if (!(dt > 0.0)) throw std::invalid_argument("solve_lifting: dt must be positive");
  const int n_steps = static_cast<int>(g_levels.size()) - 1;

  Eigen::SimplicialLLT<SpMat> llt;
  llt.compute(SpMat(M + dt * A));
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("lifting operator factorization failed");

  LiftingSeries out;
  out.dt = dt;
  out.theta.reserve(n_steps + 1);
  out.theta_t.reserve(n_steps + 1);
  out.theta.push_back(theta0);
  out.theta_t.push_back(FieldScalar::Zero(mesh.n_nodes()));

  auto h1 = [&](const FieldScalar& v) {
    return std::sqrt(v.dot(M * v) + v.dot(A * v));
  };
  out.max_h1 = h1(theta0);

  for (int n = 1; n <= n_steps; ++n) {
    const FieldScalar load = boundary_loads(mesh, g_levels[n]);
    const FieldScalar rhs = M * out.theta.back() + dt * load;
    FieldScalar next = llt.solve(rhs);
    FieldScalar rate = (next - out.theta.back()) / dt;
    out.sum_dt_theta_t_sq += dt * rate.dot(M * rate);
    out.max_h1 = std::max(out.max_h1, h1(next));
    out.theta.push_back(std::move(next));
    out.theta_t.push_back(std::move(rate));
  }
  return out;
}

FieldScalar recombine(const FieldScalar& theta, const LiftingSeries& lift,
                      int level) {
  if (level < 0 || level >= static_cast<int>(lift.theta.size()))
    throw std::out_of_range("recombine: level outside the lifting series");
  return theta + lift.theta[level];
}

}  // namespace tvp
