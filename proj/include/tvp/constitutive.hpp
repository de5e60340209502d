#pragma once

#include "tvp/tensor.hpp"

namespace tvp {

//======================================================================
// thermal coupling coefficient f(theta)
//======================================================================

enum class CouplingKind { Zero, Linear, Saturating };

// f(theta): Zero -> 0; Linear -> alpha*theta;
// Saturating -> alpha*theta / (1 + |theta|/beta), which is C^1 with
// f'(theta) = alpha / (1 + |theta|/beta)^2.
struct ThermalCoupling {
  CouplingKind kind = CouplingKind::Zero;
  double alpha = 0.0;
  double beta = 1.0;
};

double f_eval(double theta, const ThermalCoupling& c);
double f_prime(double theta, const ThermalCoupling& c);

//======================================================================
// truncation T_{1/eps}
//======================================================================

// Clamp r to [-1/eps_trunc, +1/eps_trunc].
double truncate(double r, double eps_trunc);
// Derivative of the clamp; 0 at the corners.
double truncate_deriv(double r, double eps_trunc);

//======================================================================
// power-law flow rule and its Moreau regularization
//======================================================================

// G(w) = |w|^{p-1} w on trace-free tensors.
SymTensor3 flow_rule(const SymTensor3& t_dev, double p);

// M(w) = |w|^{p+1} / (p+1), the convex potential with gradient G.
double potential(const SymTensor3& w, double p);

// Radial reduction of the proximal problem
//   min_w |z - w|^2 / (2 lambda) + M(w).
// The minimizer is s * z/|z| with s + lambda s^p = |z|, s in [0, |z|].
// Both s and the complement d = |z| - s = lambda s^p are produced from
// non-cancelling expressions: the scalar equation is solved in whichever
// of the two is the smaller root (d when lambda |z|^{p-1} <= 1, s
// otherwise), so resolvent and Yosida magnitudes are each accurate to
// machine precision even when one of them is tiny.
struct RadialSplit {
  double s;  // |J_lambda(z)|
  double d;  // |z| - s = lambda * |grad M_lambda(z)|
};
RadialSplit radial_resolvent(double mag, double lambda, double p);

// J_lambda(z): proximal map of M. lambda = 0 returns z.
SymTensor3 resolvent(const SymTensor3& z, double lambda, double p);

// grad M_lambda(z) = (z - J_lambda(z)) / lambda = G(J_lambda(z)); requires lambda > 0.
SymTensor3 yosida_grad(const SymTensor3& z, double lambda, double p);

// M_lambda(z) = |z - J_lambda(z)|^2 / (2 lambda) + M(J_lambda(z)); requires lambda > 0.
double moreau_env(const SymTensor3& z, double lambda, double p);

//======================================================================
// material parameter bundle
//======================================================================

struct MaterialParams {
  double p = 2.0;             // flow exponent, > 1
  double eps_trunc = 1.0;     // truncation level 1/eps_trunc, > 0
  double yosida_lambda = 0.0; // regularization; 0 = exact flow rule (0D oracle only)
  ElasticityTensor elasticity{1.0, 1.0};
  ThermalCoupling coupling{};

  void validate() const;  // throws std::invalid_argument on bad values
};

}  // namespace tvp
