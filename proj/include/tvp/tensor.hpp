#pragma once

#include <cmath>

namespace tvp {

// Symmetric 3x3 tensor stored as its six independent components.
// Inner products and norms double the off-diagonal terms so they agree
// with the full-matrix Frobenius convention.
struct SymTensor3 {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, yz = 0.0, xz = 0.0;

  static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  static SymTensor3 diag(double a, double b, double c) { return {a, b, c, 0.0, 0.0, 0.0}; }

  double trace() const { return xx + yy + zz; }

  SymTensor3& operator+=(const SymTensor3& o) {
    xx += o.xx; yy += o.yy; zz += o.zz;
    xy += o.xy; yz += o.yz; xz += o.xz;
    return *this;
  }
  SymTensor3& operator-=(const SymTensor3& o) {
    xx -= o.xx; yy -= o.yy; zz -= o.zz;
    xy -= o.xy; yz -= o.yz; xz -= o.xz;
    return *this;
  }
  SymTensor3& operator*=(double s) {
    xx *= s; yy *= s; zz *= s;
    xy *= s; yz *= s; xz *= s;
    return *this;
  }
};

inline SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { a += b; return a; }
inline SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { a -= b; return a; }
inline SymTensor3 operator*(double s, SymTensor3 a) { a *= s; return a; }
inline SymTensor3 operator*(SymTensor3 a, double s) { a *= s; return a; }
inline SymTensor3 operator-(SymTensor3 a) { a *= -1.0; return a; }

inline double inner(const SymTensor3& a, const SymTensor3& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz +
         2.0 * (a.xy * b.xy + a.yz * b.yz + a.xz * b.xz);
}

inline double norm(const SymTensor3& a) { return std::sqrt(inner(a, a)); }

// Deviatoric (trace-free) part.
inline SymTensor3 dev(SymTensor3 a) {
  const double m = a.trace() / 3.0;
  a.xx -= m; a.yy -= m; a.zz -= m;
  return a;
}

// Isotropic fourth-order elasticity: C(A) = lambda tr(A) I + 2 mu A.
// Positive definite on symmetric tensors iff mu > 0 and 3 lambda + 2 mu > 0.
class ElasticityTensor {
 public:
  ElasticityTensor(double lame_lambda, double lame_mu);

  double lame_lambda() const { return lambda_; }
  double lame_mu() const { return mu_; }
  double bulk3() const { return 3.0 * lambda_ + 2.0 * mu_; }

  SymTensor3 apply(const SymTensor3& a) const {
    const double lt = lambda_ * a.trace();
    return {lt + 2.0 * mu_ * a.xx, lt + 2.0 * mu_ * a.yy, lt + 2.0 * mu_ * a.zz,
            2.0 * mu_ * a.xy, 2.0 * mu_ * a.yz, 2.0 * mu_ * a.xz};
  }

  // Inverse map: C^{-1}(B) = B / (2 mu) - lambda tr(B) / ((3 lambda + 2 mu) 2 mu) I.
  SymTensor3 apply_inv(const SymTensor3& b) const {
    const double i2mu = 1.0 / (2.0 * mu_);
    const double c = lambda_ * b.trace() / bulk3() * i2mu;
    return {b.xx * i2mu - c, b.yy * i2mu - c, b.zz * i2mu - c,
            b.xy * i2mu, b.yz * i2mu, b.xz * i2mu};
  }

 private:
  double lambda_, mu_;
};

// Plane-strain embedding of a symmetric 2x2 strain (zz = yz = xz = 0).
inline SymTensor3 embed2d(double exx, double eyy, double exy) {
  return {exx, eyy, 0.0, exy, 0.0, 0.0};
}

}  // namespace tvp
