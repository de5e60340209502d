#include "tvp/constitutive.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvp {

double f_eval(double theta, const ThermalCoupling& c) {
  switch (c.kind) {
    case CouplingKind::Zero:
      return 0.0;
    case CouplingKind::Linear:
      return c.alpha * theta;
    case CouplingKind::Saturating:
      return c.alpha * theta / (1.0 + std::abs(theta) / c.beta);
  }
  return 0.0;
}

double f_prime(double theta, const ThermalCoupling& c) {
  switch (c.kind) {
    case CouplingKind::Zero:
      return 0.0;
    case CouplingKind::Linear:
      return c.alpha;
    case CouplingKind::Saturating: {
      const double q = 1.0 + std::abs(theta) / c.beta;
      return c.alpha / (q * q);
    }
  }
  return 0.0;
}

double truncate(double r, double eps_trunc) {
  const double h = 1.0 / eps_trunc;
  if (r > h) return h;
  if (r < -h) return -h;
  return r;
}

double truncate_deriv(double r, double eps_trunc) {
  const double h = 1.0 / eps_trunc;
  return (r > -h && r < h) ? 1.0 : 0.0;
}

SymTensor3 flow_rule(const SymTensor3& t_dev, double p) {
  assert(std::abs(t_dev.trace()) <= 1e-9 * (1.0 + norm(t_dev)));
  const double m = norm(t_dev);
  if (m == 0.0) return {};
  return std::pow(m, p - 1.0) * t_dev;
}

double potential(const SymTensor3& w, double p) {
  return std::pow(norm(w), p + 1.0) / (p + 1.0);
}

RadialSplit radial_resolvent(double mag, double lambda, double p) {
  if (!(mag >= 0.0) || !(lambda >= 0.0) || !(p > 1.0))
    throw std::invalid_argument("radial_resolvent: need mag >= 0, lambda >= 0, p > 1");
  if (mag == 0.0) return {0.0, 0.0};
  if (lambda == 0.0) return {mag, 0.0};

  // Root of s + lambda s^p = mag on [0, mag].  Solve for d = mag - s when the
  // elastic part dominates (lambda mag^{p-1} <= 1, so d is the small root) and
  // for s otherwise; the complementary value is then a safe subtraction.
  const bool d_branch = lambda * std::pow(mag, p - 1.0) <= 1.0;
  auto fval = [&](double x) {
    return d_branch ? x - lambda * std::pow(mag - x, p)
                    : x + lambda * std::pow(x, p) - mag;
  };
  auto fder = [&](double x) {
    return d_branch ? 1.0 + lambda * p * std::pow(mag - x, p - 1.0)
                    : 1.0 + lambda * p * std::pow(x, p - 1.0);
  };

  double lo = 0.0, hi = mag;
  const double s0 = mag / (1.0 + lambda * std::pow(mag, p - 1.0));
  double x = d_branch ? mag - s0 : s0;
  if (!(x > lo && x < hi)) x = 0.5 * mag;
  double fx = fval(x);

  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    if (fx == 0.0) { converged = true; break; }
    (fx < 0.0 ? lo : hi) = x;
    double xn = x - fx / fder(x);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) { converged = true; break; }
    x = xn;
    fx = fval(x);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * x) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("radial_resolvent: root-finder failed to converge");

  return d_branch ? RadialSplit{mag - x, x} : RadialSplit{x, mag - x};
}

SymTensor3 resolvent(const SymTensor3& z, double lambda, double p) {
  const double m = norm(z);
  if (m == 0.0) return {};
  const RadialSplit rs = radial_resolvent(m, lambda, p);
  return (rs.s / m) * z;
}

SymTensor3 yosida_grad(const SymTensor3& z, double lambda, double p) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("yosida_grad requires lambda > 0");
  const double m = norm(z);
  if (m == 0.0) return {};
  const RadialSplit rs = radial_resolvent(m, lambda, p);
  return (rs.d / (lambda * m)) * z;
}

double moreau_env(const SymTensor3& z, double lambda, double p) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("moreau_env requires lambda > 0");
  const double m = norm(z);
  if (m == 0.0) return 0.0;
  const RadialSplit rs = radial_resolvent(m, lambda, p);
  return rs.d * rs.d / (2.0 * lambda) + std::pow(rs.s, p + 1.0) / (p + 1.0);
}

void MaterialParams::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("material.p must exceed 1");
  if (!(eps_trunc > 0.0))
    throw std::invalid_argument("material.eps_trunc must be positive");
  if (!(yosida_lambda >= 0.0))
    throw std::invalid_argument("material.yosida_lambda must be nonnegative");
  if (coupling.kind == CouplingKind::Saturating && !(coupling.beta > 0.0))
    throw std::invalid_argument("coupling.beta must be positive");
}

}  // namespace tvp
