// Serial reference path vs OpenMP path for the grid kernels. Prints one row
// per kernel with the best-of-N wall time of each path, the speedup, and
// whether the two paths produced identical results.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "gaussbalance/balancing.hpp"
#include "gaussbalance/bodies.hpp"
#include "gaussbalance/bounds.hpp"
#include "gaussbalance/cones.hpp"
#include "gaussbalance/lattice.hpp"
#include "gaussbalance/parallel.hpp"
#include "gaussbalance/regions.hpp"

namespace {

using namespace gaussbalance;

double best_seconds(const std::function<double(Exec)>& kernel, Exec exec, int repeats, double& result) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    result = kernel(exec);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

void bench(const std::string& name, const std::function<double(Exec)>& kernel, int repeats = 3) {
  double serial_value = 0.0, parallel_value = 0.0;
  const double ts = best_seconds(kernel, Exec::serial, repeats, serial_value);
  const double tp = best_seconds(kernel, Exec::parallel, repeats, parallel_value);
  std::printf("%-28s %12.4f %12.4f %8.2fx  %s\n", name.c_str(), ts, tp, ts / tp,
              serial_value == parallel_value ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  const int threads = configure_threads_from_env();
  std::printf("threads: %d (set GAUSSBALANCE_THREADS to cap)\n", threads);
  std::printf("%-28s %12s %12s %9s  %s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "results");

  bench("cone_sweep_p0.25_n20000", [](Exec e) { return sweep_verify(0.25, 20000, e).max_excess; });
  bench("critical_point_p0.4_n20000", [](Exec e) { return find_critical_theta(0.4, 20000, e).theta_star; });
  bench("derivative_suite_3x200", [](Exec e) {
    double worst = 0.0;
    for (const auto& d : derivative_suite({0.25, 0.5, 0.75}, 200, 42, e)) worst = std::max(worst, d.rel_error);
    return worst;
  });
  bench("planar_suite_1000", [](Exec e) { return run_prop_planar_suite({0.1, 0.25, 0.4, 0.5}, 1000, 42, e).worst_margin; });
  bench("steiner_suite_100", [](Exec e) { return run_steiner_suite(100, 42, e).worst_measure_gain; });
  bench("min_sign_balance_t20", [](Exec e) {
    std::vector<Vec> vs;
    for (int i = 0; i < 20; ++i) {
      Vec v(3);
      v << std::cos(0.7 * i), std::sin(0.7 * i), std::cos(1.3 * i + 0.2);
      vs.push_back(v);
    }
    return min_sign_balance(VectorTuple(vs), *lp_ball(2, 3), e).value;
  });
  bench("beta_subset_t12", [](Exec e) {
    std::vector<Vec> vs;
    for (int i = 0; i < 12; ++i) {
      Vec v(2);
      v << std::cos(0.9 * i), std::sin(0.9 * i);
      vs.push_back(v);
    }
    return beta_subset(VectorTuple(vs), *lp_ball(kInfinityNorm, 2), e);
  });
  bench("dyadic_grid_k8", [](Exec e) {
    return verify_dyadic_grid(VectorTuple::from_columns(Mat::Identity(2, 2)), *lp_ball(2, 2), 8, e).max_excess;
  });
  bench("covering_radius_Z3_grid32", [](Exec e) {
    CoveringOptions opt;
    opt.grid = 32;
    opt.exec = e;
    return covering_radius(LatticeBasis::identity(3), *lp_ball(2, 3), opt).value;
  });
  bench("ratio_infimum_n1e6", [](Exec e) { return ratio_infimum(1000000, 400, e).inf_value; });
  return 0;
}
