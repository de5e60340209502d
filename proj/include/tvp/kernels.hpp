#pragma once

#include <span>

#include "tvp/constitutive.hpp"

namespace tvp::kernels {

// Execution policy for the element-local sweeps.  Both paths perform the
// same per-element arithmetic and write disjoint slots, so Serial and
// Parallel results are bit-identical; Serial is kept as the reference
// implementation for tests and benchmarks.
enum class Exec { Serial, Parallel };

// Advance the element-local inelastic strain through one time step of
//   d/dt eps_p = grad M_lambda(dev C(strain_star - eps_p)),
// with the total strain frozen at strain_star, using `substeps` Heun
// (explicit trapezoid) sub-steps.  Requires dt/substeps <= lambda/2.
SymTensor3 integrate_cell(const SymTensor3& eps_p0, const SymTensor3& strain_star,
                          const ElasticityTensor& C, double p, double lambda,
                          double dt, int substeps);

// Batched integrate_cell over all elements.
void integrate_inelastic(std::span<const SymTensor3> eps_p,
                         std::span<const SymTensor3> strain_star,
                         const ElasticityTensor& C, double p, double lambda,
                         double dt, int substeps, std::span<SymTensor3> out,
                         Exec exec);

// out[e] = C(strain[e] - eps_p[e]).
void eval_stress(std::span<const SymTensor3> strain,
                 std::span<const SymTensor3> eps_p, const ElasticityTensor& C,
                 std::span<SymTensor3> out, Exec exec);

}  // namespace tvp::kernels
