#include "tvp/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tvp/fields.hpp"
#include "tvp/mesh.hpp"

namespace tvp {

double time_shape_eval(TimeShape s, double omega, double t) {
  switch (s) {
    case TimeShape::Zero: return 0.0;
    case TimeShape::Constant: return 1.0;
    case TimeShape::Ramp: return t;
    case TimeShape::Sinusoid: return std::sin(omega * t);
  }
  return 0.0;
}

double time_shape_rate(TimeShape s, double omega, double t) {
  switch (s) {
    case TimeShape::Zero: return 0.0;
    case TimeShape::Constant: return 0.0;
    case TimeShape::Ramp: return 1.0;
    case TimeShape::Sinusoid: return omega * std::cos(omega * t);
  }
  return 0.0;
}

int TimeSpec::n_steps() const {
  if (!(dt > 0.0)) throw std::invalid_argument("time.dt must be positive");
  if (!(t_final > 0.0))
    throw std::invalid_argument("time.t_final must be positive");
  const double q = t_final / dt;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * q)
    throw std::invalid_argument("time.dt must divide time.t_final");
  return static_cast<int>(r);
}

//======================================================================
// shared nodal interpolants
//======================================================================

FieldVector nodal_u0(const Mesh2D& mesh, const AffineDisplacement& u0) {
  FieldVector u(2 * mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) {
    const Eigen::Vector2d v = u0.eval(mesh.nodes[n]);
    u[2 * n] = v.x();
    u[2 * n + 1] = v.y();
  }
  return u;
}

FieldScalar nodal_theta0(const Mesh2D& mesh, const AffineScalar& theta0) {
  FieldScalar v(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) v[n] = theta0.eval(mesh.nodes[n]);
  return v;
}

FieldScalar nodal_gtheta(const Mesh2D& mesh, const ScalarBC& g, double t) {
  FieldScalar v(mesh.n_nodes());
  for (int n = 0; n < mesh.n_nodes(); ++n) v[n] = g.eval(mesh.nodes[n], t);
  return v;
}

Eigen::VectorXd boundary_gd(const Mesh2D& mesh, const DisplacementBC& g, double t) {
  Eigen::VectorXd v(2 * mesh.boundary_nodes.size());
  for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k) {
    const Eigen::Vector2d gv = g.eval(mesh.nodes[mesh.boundary_nodes[k]], t);
    v[2 * k] = gv.x();
    v[2 * k + 1] = gv.y();
  }
  return v;
}

Eigen::VectorXd boundary_gd_rate(const Mesh2D& mesh, const DisplacementBC& g,
                                 double t) {
  Eigen::VectorXd v(2 * mesh.boundary_nodes.size());
  for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k) {
    const Eigen::Vector2d gv = g.eval_dt(mesh.nodes[mesh.boundary_nodes[k]], t);
    v[2 * k] = gv.x();
    v[2 * k + 1] = gv.y();
  }
  return v;
}

//======================================================================
// validation
//======================================================================

void Scenario::validate() const {
  if (mesh.nx < 1) throw std::invalid_argument("mesh.nx must be at least 1");
  if (mesh.ny < 1) throw std::invalid_argument("mesh.ny must be at least 1");
  if (!(mesh.lx > 0.0)) throw std::invalid_argument("mesh.lx must be positive");
  if (!(mesh.ly > 0.0)) throw std::invalid_argument("mesh.ly must be positive");

  time.n_steps();
  material.validate();

  if (!(solver.picard_tol > 0.0 && solver.picard_tol < 1.0))
    throw std::invalid_argument("solver.picard_tol must lie in (0, 1)");
  if (solver.picard_max < 1)
    throw std::invalid_argument("solver.picard_max must be at least 1");
  if (solver.substeps < 1)
    throw std::invalid_argument("solver.substeps must be at least 1");

  if (std::abs(epsp0.trace()) > 1e-12)
    throw std::invalid_argument("init.epsp0 must be traceless");

  const Mesh2D m = Mesh2D::rectangle(mesh.nx, mesh.ny, mesh.lx, mesh.ly);

  for (int n : m.boundary_nodes) {
    const Eigen::Vector2d diff = u0.eval(m.nodes[n]) - g_d.eval(m.nodes[n], 0.0);
    if (!(diff.norm() <= 1e-9))
      throw std::invalid_argument(
          "init.u0 must match bc.gd at t = 0 on the boundary");
  }

  // admissibility: the flow rule applied to the initial stress deviator must
  // stay finite on every element
  const FieldTensor eps0 = strain_of(m, nodal_u0(m, u0));
  for (int e = 0; e < m.n_elems(); ++e) {
    const SymTensor3 g =
        flow_rule(dev(material.elasticity.apply(eps0[e] - epsp0)), material.p);
    if (!std::isfinite(inner(g, g)))
      throw std::invalid_argument(
          "initial data are inadmissible: the flow rule of the initial "
          "stress deviator is not finite");
  }
}

bool Scenario::homogeneous() const {
  return force.identically_zero() && g_theta.identically_zero() &&
         theta0.spatially_constant();
}

bool Scenario::closed() const {
  return force.identically_zero() && g_d.time_constant() &&
         g_theta.identically_zero() && material.coupling.kind == CouplingKind::Zero;
}

//======================================================================
// parser
//======================================================================

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

class KeyMap {
 public:
  explicit KeyMap(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                    ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty() || val.empty())
        throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                    ": expected 'key = value'");
      if (!map_.emplace(key, val).second)
        throw std::invalid_argument("scenario: duplicate key '" + key + "'");
    }
  }

  bool has(const std::string& key) {
    const auto it = map_.find(key);
    if (it == map_.end()) return false;
    used_.insert(key);
    return true;
  }

  std::string str(const std::string& key, const std::string& dflt) {
    const auto it = map_.find(key);
    if (it == map_.end()) return dflt;
    used_.insert(key);
    return it->second;
  }

  double num(const std::string& key, double dflt) {
    const auto it = map_.find(key);
    if (it == map_.end()) return dflt;
    used_.insert(key);
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != it->second.size())
      throw std::invalid_argument("scenario: key '" + key +
                                  "' has a non-numeric value '" + it->second + "'");
    return v;
  }

  int integer(const std::string& key, int dflt) {
    const double v = num(key, static_cast<double>(dflt));
    const double r = std::round(v);
    if (std::abs(v - r) > 0.0)
      throw std::invalid_argument("scenario: key '" + key +
                                  "' must be an integer");
    return static_cast<int>(r);
  }

  void finish() const {
    for (const auto& [key, val] : map_)
      if (!used_.count(key))
        throw std::invalid_argument("scenario: unknown key '" + key + "'");
  }

 private:
  std::map<std::string, std::string> map_;
  std::set<std::string> used_;
};

TimeShape parse_shape(const std::string& kind, const std::string& key) {
  if (kind == "zero") return TimeShape::Zero;
  if (kind == "constant" || kind == "affine") return TimeShape::Constant;
  if (kind == "ramp") return TimeShape::Ramp;
  if (kind == "sinusoid") return TimeShape::Sinusoid;
  throw std::invalid_argument(key + ": unknown preset '" + kind + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
  KeyMap kv(text);
  Scenario sc;
  sc.name = kv.str("name", name);

  sc.mesh.nx = kv.integer("mesh.nx", sc.mesh.nx);
  sc.mesh.ny = kv.integer("mesh.ny", sc.mesh.ny);
  sc.mesh.lx = kv.num("mesh.lx", sc.mesh.lx);
  sc.mesh.ly = kv.num("mesh.ly", sc.mesh.ly);

  sc.time.t_final = kv.num("time.t_final", sc.time.t_final);
  sc.time.dt = kv.num("time.dt", sc.time.dt);

  sc.material.p = kv.num("material.p", sc.material.p);
  sc.material.eps_trunc = kv.num("material.eps_trunc", sc.material.eps_trunc);
  sc.material.yosida_lambda =
      kv.num("material.yosida_lambda", sc.material.yosida_lambda);
  {
    const double ll = kv.num("material.lame_lambda", 1.0);
    const double mu = kv.num("material.lame_mu", 1.0);
    if (!(mu > 0.0) || !(3.0 * ll + 2.0 * mu > 0.0))
      throw std::invalid_argument(
          "material.lame_mu must be positive and 3*lame_lambda + 2*lame_mu "
          "must be positive");
    sc.material.elasticity = ElasticityTensor(ll, mu);
  }

  {
    const std::string kind = kv.str("coupling.kind", "zero");
    if (kind == "zero") sc.material.coupling.kind = CouplingKind::Zero;
    else if (kind == "linear") sc.material.coupling.kind = CouplingKind::Linear;
    else if (kind == "saturating")
      sc.material.coupling.kind = CouplingKind::Saturating;
    else
      throw std::invalid_argument("coupling.kind: unknown preset '" + kind + "'");
    sc.material.coupling.alpha = kv.num("coupling.alpha", 0.0);
    sc.material.coupling.beta = kv.num("coupling.beta", 1.0);
  }

  sc.solver.picard_tol = kv.num("solver.picard_tol", sc.solver.picard_tol);
  sc.solver.picard_max = kv.integer("solver.picard_max", sc.solver.picard_max);
  sc.solver.substeps = kv.integer("solver.substeps", sc.solver.substeps);

  {
    const std::string kind = kv.str("bc.gd.kind", "zero");
    sc.g_d.shape = parse_shape(kind, "bc.gd.kind");
    if (kind != "zero") {
      if (kind != "constant") {
        sc.g_d.A(0, 0) = kv.num("bc.gd.axx", 0.0);
        sc.g_d.A(0, 1) = kv.num("bc.gd.axy", 0.0);
        sc.g_d.A(1, 0) = kv.num("bc.gd.ayx", 0.0);
        sc.g_d.A(1, 1) = kv.num("bc.gd.ayy", 0.0);
      }
      sc.g_d.b.x() = kv.num("bc.gd.bx", 0.0);
      sc.g_d.b.y() = kv.num("bc.gd.by", 0.0);
      if (kind == "sinusoid") sc.g_d.omega = kv.num("bc.gd.omega", 1.0);
    }
  }

  {
    const std::string kind = kv.str("bc.gtheta.kind", "zero");
    sc.g_theta.shape = parse_shape(kind, "bc.gtheta.kind");
    if (kind != "zero") {
      if (kind != "constant") {
        sc.g_theta.a.x() = kv.num("bc.gtheta.ax", 0.0);
        sc.g_theta.a.y() = kv.num("bc.gtheta.ay", 0.0);
      }
      sc.g_theta.c = kv.num("bc.gtheta.c", 0.0);
      if (kind == "sinusoid") sc.g_theta.omega = kv.num("bc.gtheta.omega", 1.0);
    }
  }

  {
    const std::string kind = kv.str("force.kind", "zero");
    if (kind == "affine")
      throw std::invalid_argument("force.kind: unknown preset 'affine'");
    sc.force.shape = parse_shape(kind, "force.kind");
    if (kind != "zero") {
      sc.force.F0.x() = kv.num("force.fx", 0.0);
      sc.force.F0.y() = kv.num("force.fy", 0.0);
      if (kind == "sinusoid") sc.force.omega = kv.num("force.omega", 1.0);
    }
  }

  {
    const std::string kind = kv.str("init.u0.kind", "zero");
    if (kind == "affine") {
      sc.u0.A(0, 0) = kv.num("init.u0.axx", 0.0);
      sc.u0.A(0, 1) = kv.num("init.u0.axy", 0.0);
      sc.u0.A(1, 0) = kv.num("init.u0.ayx", 0.0);
      sc.u0.A(1, 1) = kv.num("init.u0.ayy", 0.0);
      sc.u0.b.x() = kv.num("init.u0.bx", 0.0);
      sc.u0.b.y() = kv.num("init.u0.by", 0.0);
    } else if (kind != "zero") {
      throw std::invalid_argument("init.u0.kind: unknown preset '" + kind + "'");
    }
  }

  {
    const std::string kind = kv.str("init.theta0.kind", "zero");
    if (kind == "constant" || kind == "affine") {
      sc.theta0.c = kv.num("init.theta0.c", 0.0);
      if (kind == "affine") {
        sc.theta0.a.x() = kv.num("init.theta0.ax", 0.0);
        sc.theta0.a.y() = kv.num("init.theta0.ay", 0.0);
      }
    } else if (kind != "zero") {
      throw std::invalid_argument("init.theta0.kind: unknown preset '" + kind +
                                  "'");
    }
  }

  {
    const std::string kind = kv.str("init.epsp0.kind", "zero");
    if (kind == "constant") {
      sc.epsp0.xx = kv.num("init.epsp0.xx", 0.0);
      sc.epsp0.yy = kv.num("init.epsp0.yy", 0.0);
      sc.epsp0.zz = kv.num("init.epsp0.zz", 0.0);
      sc.epsp0.xy = kv.num("init.epsp0.xy", 0.0);
      sc.epsp0.yz = kv.num("init.epsp0.yz", 0.0);
      sc.epsp0.xz = kv.num("init.epsp0.xz", 0.0);
    } else if (kind != "zero") {
      throw std::invalid_argument("init.epsp0.kind: unknown preset '" + kind +
                                  "'");
    }
  }

  {
    const std::string kind = kv.str("oracle.history", "ramp");
    if (kind == "ramp") sc.oracle.history = OracleHistory::Ramp;
    else if (kind == "hold") sc.oracle.history = OracleHistory::Hold;
    else if (kind == "sinusoid") sc.oracle.history = OracleHistory::Sinusoid;
    else
      throw std::invalid_argument("oracle.history: unknown preset '" + kind +
                                  "'");
    sc.oracle.amplitude.xx = kv.num("oracle.exx", 0.0);
    sc.oracle.amplitude.yy = kv.num("oracle.eyy", 0.0);
    sc.oracle.amplitude.zz = kv.num("oracle.ezz", 0.0);
    sc.oracle.amplitude.xy = kv.num("oracle.exy", 0.0);
    sc.oracle.amplitude.yz = kv.num("oracle.eyz", 0.0);
    sc.oracle.amplitude.xz = kv.num("oracle.exz", 0.0);
    sc.oracle.omega = kv.num("oracle.omega", 1.0);
    sc.oracle.n_steps = kv.integer("oracle.n_steps", sc.oracle.n_steps);
    sc.oracle.stride = kv.integer("oracle.stride", sc.oracle.stride);
    if (sc.oracle.n_steps < 1)
      throw std::invalid_argument("oracle.n_steps must be at least 1");
    if (sc.oracle.stride < 0)
      throw std::invalid_argument("oracle.stride must be nonnegative");
  }

  kv.finish();
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
    stem.erase(0, slash + 1);
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos)
    stem.erase(dot);
  return parse_scenario(buf.str(), stem);
}

}  // namespace tvp
