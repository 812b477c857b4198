#pragma once

// A non-symmetric body of large Gaussian measure against which a two-vector
// tuple from the unit ball balances badly: the shifted cone
// C'_s = C_{d,t} - s e_n, whose balancing constant grows like 1/s while its
// measure stays bounded below.

#include <vector>

#include "gaussbalance/balancing.hpp"

namespace gaussbalance {

/// gamma_n(C_{d,t}) = int_0^d pdf(z) gamma_{n-1}(t z B) dz; d may be +inf.
/// Requires 2 <= n <= 6, d >= 0, t > 0.
double cone_measure(int n, double d, double t);

/// gamma_n(C_{d,t} - s e_n) = int_{-s}^{d-s} pdf(z) gamma_{n-1}(t (z + s) B) dz.
double shifted_cone_measure(int n, double d, double t, double s);

/// Euclidean distance from a planar point to C_{d,t} (axis e_2, apex 0).
double dist_to_cone(const Vec& point, double d, double t);

/// Slope t_p with gamma_2(C_{inf,t_p}) = p, by bisection.
double critical_aperture(double p);

struct CounterexampleInstance {
  int n;
  double p;
  double t;
  double d;
  double s;
  double gamma;          // gamma_2(C_{d,t})
  double gamma_shifted;  // gamma_2(C'_s)
  double delta;          // distance from the signed sums of the tuple to C_{d,t}
  double beta_lb;        // delta / s
  double min_balance;    // exact min over signs of the gauge in C'_s
  VectorTuple tuple;
  double ball_height;    // centre of the inscribed translate of n B_2^n on the axis
  bool ball_inside;      // boundary samples of that ball lie in C_{d,t}
  bool sums_outside;     // no signed sum lies in C'_s
};

/// Instances for 0 < p < 1/2 and each shift s (0 < s < 1). Throws
/// std::runtime_error if the parameter search fails.
std::vector<CounterexampleInstance> build_counterexample(double p, const std::vector<double>& s_list);

}  // namespace gaussbalance
