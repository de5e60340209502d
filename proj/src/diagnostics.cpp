#include "tvp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tvp/stepper.hpp"

namespace tvp {

double thermal_energy(const Mesh2D& mesh, const FieldScalar& theta_hat) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e)
    s += mesh.areas[e] * mesh.centroid_mean(theta_hat, e);
  return s;
}

double elastic_energy(const Mesh2D& mesh, const ElasticityTensor& C,
                      const FieldTensor& T) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e)
    s += 0.5 * mesh.areas[e] * inner(C.apply_inv(T[e]), T[e]);
  return s;
}

double dissipation_min(const Mesh2D& mesh, const FieldTensor& T,
                       const FieldTensor& rate) {
  double worst = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.n_elems(); ++e)
    worst = std::min(worst, inner(dev(T[e]), rate[e]));
  return mesh.n_elems() > 0 ? worst : 0.0;
}

double field_l2(const Mesh2D& mesh, const FieldTensor& v) {
  double s = 0.0;
  for (int e = 0; e < mesh.n_elems(); ++e) s += mesh.areas[e] * inner(v[e], v[e]);
  return std::sqrt(s);
}

SweepResult sweep_lambda(const Scenario& sc, const std::vector<double>& lambdas) {
  if (lambdas.empty())
    throw std::invalid_argument("sweep requires at least one lambda value");
  for (double l : lambdas)
    if (!(l > 0.0))
      throw std::invalid_argument("sweep lambda values must be positive");

  SweepResult out;
  std::vector<RunResult> results;
  results.reserve(lambdas.size());

  for (double lambda : lambdas) {
    Scenario variant = sc;
    variant.material.yosida_lambda = lambda;
    SweepRun row;
    row.lambda = lambda;
    try {
      RunResult rr = run(variant);
      row.failed = rr.failed;
      row.failure = rr.failure;
      row.picard_ok = !rr.failed;
      row.diag = rr.diag;
      row.min_dissipation = std::numeric_limits<double>::infinity();
      for (size_t n = 1; n < row.diag.rows.size(); ++n)
        row.min_dissipation =
            std::min(row.min_dissipation, row.diag.rows[n].min_dissipation);
      if (row.diag.rows.size() <= 1) row.min_dissipation = 0.0;
      results.push_back(std::move(rr));
    } catch (const std::exception& err) {
      row.failed = true;
      row.failure = err.what();
      row.picard_ok = false;
      results.emplace_back();
      results.back().failed = true;
    }
    out.runs.push_back(std::move(row));
  }

  out.all_ok = std::all_of(out.runs.begin(), out.runs.end(),
                           [](const SweepRun& r) { return !r.failed; });

  // pairwise sup-norm gaps between consecutive ladder entries
  for (size_t k = 0; k + 1 < results.size(); ++k) {
    SweepPair pair;
    pair.lambda_a = lambdas[k];
    pair.lambda_b = lambdas[k + 1];
    const auto& ta = results[k].trajectory;
    const auto& tb = results[k + 1].trajectory;
    if (!results[k].failed && !results[k + 1].failed && ta.size() == tb.size()) {
      double sup = 0.0;
      for (size_t n = 0; n < ta.size(); ++n)
        for (size_t e = 0; e < ta[n].T.size(); ++e)
          sup = std::max(sup, norm(ta[n].T[e] - tb[n].T[e]));
      pair.sup_diff_T = sup;
    } else {
      pair.sup_diff_T = std::numeric_limits<double>::quiet_NaN();
    }
    out.pairs.push_back(pair);
  }

  auto spread = [&](auto pick) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : out.runs) {
      if (r.failed) return std::numeric_limits<double>::quiet_NaN();
      lo = std::min(lo, pick(r));
      hi = std::max(hi, pick(r));
    }
    return hi > 0.0 ? (hi - lo) / hi : 0.0;
  };
  out.spread_sup_T = spread([](const SweepRun& r) { return r.diag.sup_norm_T; });
  out.spread_sum_Tt =
      spread([](const SweepRun& r) { return r.diag.sum_dt_norm_Tt_sq; });

  // Both orderings are vacuously true for short ladders.
  out.cauchy_decreasing = out.all_ok;
  for (size_t k = 0; k + 1 < out.pairs.size(); ++k)
    if (!(out.pairs[k].sup_diff_T > out.pairs[k + 1].sup_diff_T))
      out.cauchy_decreasing = false;
  for (const auto& p : out.pairs)
    if (std::isnan(p.sup_diff_T)) out.cauchy_decreasing = false;

  out.resolvent_decreasing = out.all_ok;
  for (size_t k = 0; k + 1 < out.runs.size(); ++k)
    if (!(out.runs[k].diag.resolvent_metric >
          out.runs[k + 1].diag.resolvent_metric))
      out.resolvent_decreasing = false;

  return out;
}

}  // namespace tvp
