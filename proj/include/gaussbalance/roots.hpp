#pragma once

#include <cmath>
#include <limits>

namespace gaussbalance::detail {

// Newton iteration kept inside a shrinking bracket; falls back to bisection
// whenever the Newton step leaves (lo, hi). `eval(x)` returns {f(x), f'(x)}
// for an increasing f with f(lo) <= 0 <= f(hi).
template <class Eval>
double bracketed_newton(Eval eval, double lo, double hi, double x, double rel_tol = 1e-15,
                        int max_iter = 300) {
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [f, df] = eval(x);
    if (f == 0.0) return x;
    if (f < 0.0)
      lo = x;
    else
      hi = x;
    double next = (df > 0.0 && std::isfinite(f)) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double scale = std::max(std::abs(next), std::numeric_limits<double>::min());
    if (std::abs(next - x) <= rel_tol * scale || hi - lo <= rel_tol * scale) return next;
    x = next;
  }
  return x;
}

}  // namespace gaussbalance::detail
