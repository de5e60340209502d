// Benchmark: parallel element sweeps against the serial reference.
// Prints a timing table plus the max elementwise difference between the
// two execution paths (expected to be exactly zero — both paths run the
// same per-element arithmetic and write disjoint slots).

#include <omp.h>

#include <cstdio>
#include <random>
#include <vector>

#include "tvp/kernels.hpp"

using namespace tvp;

namespace {

std::vector<SymTensor3> random_field(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<SymTensor3> f(n);
  for (auto& t : f) t = SymTensor3{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
  return f;
}

double max_abs_diff(const std::vector<SymTensor3>& a,
                    const std::vector<SymTensor3>& b) {
  double m = 0.0;
  for (size_t e = 0; e < a.size(); ++e) m = std::max(m, norm(a[e] - b[e]));
  return m;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

}  // namespace

int main() {
  const ElasticityTensor C(0.7, 1.3);
  const double p = 3.0, lambda = 1e-2, dt = 1e-3;
  const int substeps = 4;

  std::printf("threads available: %d\n\n", omp_get_max_threads());
  std::printf("%-22s %10s %12s %12s %9s %10s\n", "kernel", "elements",
              "serial (s)", "parallel (s)", "speedup", "max diff");

  std::mt19937_64 rng(7001);
  for (const int n : {4096, 65536, 524288}) {
    const auto eps_p = random_field(rng, n, 0.3);
    const auto strain = random_field(rng, n, 0.8);
    std::vector<SymTensor3> out_s(n), out_p(n);

    const double ts_int = time_best_of(3, [&] {
      kernels::integrate_inelastic(eps_p, strain, C, p, lambda, dt, substeps,
                                   out_s, kernels::Exec::Serial);
    });
    const double tp_int = time_best_of(3, [&] {
      kernels::integrate_inelastic(eps_p, strain, C, p, lambda, dt, substeps,
                                   out_p, kernels::Exec::Parallel);
    });
    std::printf("%-22s %10d %12.6f %12.6f %8.2fx %10.3e\n",
                "integrate_inelastic", n, ts_int, tp_int, ts_int / tp_int,
                max_abs_diff(out_s, out_p));

    const double ts_st = time_best_of(3, [&] {
      kernels::eval_stress(strain, eps_p, C, out_s, kernels::Exec::Serial);
    });
    const double tp_st = time_best_of(3, [&] {
      kernels::eval_stress(strain, eps_p, C, out_p, kernels::Exec::Parallel);
    });
    std::printf("%-22s %10d %12.6f %12.6f %8.2fx %10.3e\n", "eval_stress", n,
                ts_st, tp_st, ts_st / tp_st, max_abs_diff(out_s, out_p));
  }
  return 0;
}
