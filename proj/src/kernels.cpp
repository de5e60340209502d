#include "tvp/kernels.hpp"

#include <cstddef>
#include <stdexcept>

namespace tvp::kernels {

SymTensor3 integrate_cell(const SymTensor3& eps_p0, const SymTensor3& strain_star,
                          const ElasticityTensor& C, double p, double lambda,
                          double dt, int substeps) {
  const double h = dt / substeps;
  SymTensor3 ep = eps_p0;
  for (int k = 0; k < substeps; ++k) {
    const SymTensor3 r1 = yosida_grad(dev(C.apply(strain_star - ep)), lambda, p);
    const SymTensor3 mid = ep + h * r1;
    const SymTensor3 r2 = yosida_grad(dev(C.apply(strain_star - mid)), lambda, p);
    ep += (0.5 * h) * (r1 + r2);
  }
  return ep;
}

static void check_args(std::size_t n_in, std::size_t n_star, std::size_t n_out,
                       double lambda, double dt, int substeps) {
  if (n_in != n_star || n_in != n_out)
    throw std::invalid_argument("integrate_inelastic: span sizes differ");
  if (!(lambda > 0.0))
    throw std::invalid_argument("integrate_inelastic requires lambda > 0");
  if (substeps < 1)
    throw std::invalid_argument("solver.substeps must be at least 1");
  if (!(dt / substeps <= 0.5 * lambda))
    throw std::invalid_argument(
        "stability guard dt/substeps <= lambda/2 violated; increase "
        "solver.substeps or material.yosida_lambda");
}

void integrate_inelastic(std::span<const SymTensor3> eps_p,
                         std::span<const SymTensor3> strain_star,
                         const ElasticityTensor& C, double p, double lambda,
                         double dt, int substeps, std::span<SymTensor3> out,
                         Exec exec) {
  check_args(eps_p.size(), strain_star.size(), out.size(), lambda, dt, substeps);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(eps_p.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < n; ++e)
      out[e] = integrate_cell(eps_p[e], strain_star[e], C, p, lambda, dt, substeps);
  } else {
    for (std::ptrdiff_t e = 0; e < n; ++e)
      out[e] = integrate_cell(eps_p[e], strain_star[e], C, p, lambda, dt, substeps);
  }
}

void eval_stress(std::span<const SymTensor3> strain,
                 std::span<const SymTensor3> eps_p, const ElasticityTensor& C,
                 std::span<SymTensor3> out, Exec exec) {
  if (strain.size() != eps_p.size() || strain.size() != out.size())
    throw std::invalid_argument("eval_stress: span sizes differ");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(strain.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < n; ++e)
      out[e] = C.apply(strain[e] - eps_p[e]);
  } else {
    for (std::ptrdiff_t e = 0; e < n; ++e)
      out[e] = C.apply(strain[e] - eps_p[e]);
  }
}

}  // namespace tvp::kernels
