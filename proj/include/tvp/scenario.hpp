#pragma once

#include <string>

#include <Eigen/Dense>

#include "tvp/constitutive.hpp"
#include "tvp/kernels.hpp"

namespace tvp {

// Time profile s(t) applied to an affine-in-space shape:
//   Zero -> 0, Constant -> 1, Ramp -> t, Sinusoid -> sin(omega t).
enum class TimeShape { Zero, Constant, Ramp, Sinusoid };

double time_shape_eval(TimeShape s, double omega, double t);
double time_shape_rate(TimeShape s, double omega, double t);  // d/dt

// g_D(x, t) = s(t) * (A x + b)
struct DisplacementBC {
  TimeShape shape = TimeShape::Zero;
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  double omega = 0.0;

  Eigen::Vector2d eval(const Eigen::Vector2d& x, double t) const {
    return time_shape_eval(shape, omega, t) * (A * x + b);
  }
  Eigen::Vector2d eval_dt(const Eigen::Vector2d& x, double t) const {
    return time_shape_rate(shape, omega, t) * (A * x + b);
  }
  bool time_constant() const {
    return shape == TimeShape::Zero || shape == TimeShape::Constant;
  }
};

// g_theta(x, t) = s(t) * (a . x + c)
struct ScalarBC {
  TimeShape shape = TimeShape::Zero;
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  double c = 0.0;
  double omega = 0.0;

  double eval(const Eigen::Vector2d& x, double t) const {
    return time_shape_eval(shape, omega, t) * (a.dot(x) + c);
  }
  bool identically_zero() const {
    return shape == TimeShape::Zero || (a.isZero(0.0) && c == 0.0);
  }
};

// F(x, t) = s(t) * F0 (constant in space)
struct BodyForce {
  TimeShape shape = TimeShape::Zero;
  Eigen::Vector2d F0 = Eigen::Vector2d::Zero();
  double omega = 0.0;

  Eigen::Vector2d eval(double t) const {
    return time_shape_eval(shape, omega, t) * F0;
  }
  bool identically_zero() const {
    return shape == TimeShape::Zero || F0.isZero(0.0);
  }
};

// u0(x) = A x + b
struct AffineDisplacement {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  Eigen::Vector2d eval(const Eigen::Vector2d& x) const { return A * x + b; }
};

// theta0(x) = a . x + c
struct AffineScalar {
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  double c = 0.0;
  double eval(const Eigen::Vector2d& x) const { return a.dot(x) + c; }
  bool spatially_constant() const { return a.isZero(0.0); }
};

struct MeshSpec {
  int nx = 1, ny = 1;
  double lx = 1.0, ly = 1.0;
};

struct TimeSpec {
  double t_final = 1.0;
  double dt = 0.01;
  int n_steps() const;  // validated integer count
};

struct SolverParams {
  double picard_tol = 1e-10;
  int picard_max = 50;
  int substeps = 64;
  kernels::Exec exec = kernels::Exec::Parallel;
};

// 0D prescribed-strain history for the reference integrator:
//   ramp     -> eps(t) = t * E0
//   hold     -> eps(t) = E0
//   sinusoid -> eps(t) = sin(omega t) * E0
enum class OracleHistory { Ramp, Hold, Sinusoid };

struct OracleSpec {
  OracleHistory history = OracleHistory::Ramp;
  SymTensor3 amplitude{};
  double omega = 1.0;
  int n_steps = 200000;
  int stride = 0;  // CSV thinning; 0 = choose so that about 1000 rows appear
};

struct Scenario {
  std::string name = "scenario";
  MeshSpec mesh;
  TimeSpec time;
  MaterialParams material;
  SolverParams solver;
  DisplacementBC g_d;
  ScalarBC g_theta;
  BodyForce force;
  AffineDisplacement u0;
  AffineScalar theta0;
  SymTensor3 epsp0{};
  OracleSpec oracle;

  // Full validation: parameter ranges, dt | t_final, boundary compatibility
  // of u0 with g_D(., 0), and finiteness of the flow rule applied to the
  // initial stress deviator.  Throws std::invalid_argument.
  void validate() const;

  // True when the data admit a spatially homogeneous discrete solution so
  // the run can be compared against the 0D reference integrator.
  bool homogeneous() const;

  // True when the energy ledger applies: no external work enters after t = 0.
  bool closed() const;
};

// Parse the flat `section.key = value` text format ('#' comments, blank
// lines ignored).  Unknown keys are rejected.  The result is validated.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& name);

}  // namespace tvp
