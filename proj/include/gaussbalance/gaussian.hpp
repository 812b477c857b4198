#pragma once

// One-dimensional Gaussian primitives and radial measures of centered balls.
// All functions are pure and thread-safe.

namespace gaussbalance {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Standard normal density.
double pdf(double x);
/// Phi(x) = gamma_1((-inf, x]).
double cdf(double x);
/// 1 - Phi(x), accurate in the upper tail.
double ccdf(double x);
/// Phi^{-1}(q) for q in (0, 1). Throws std::domain_error otherwise.
double inv_cdf(double q);

/// Psi(x) = gamma_1([-x, x]) for x >= 0.
double psi(double x);
/// Psi^{-1}(p) for p in [0, 1).
double inv_psi(double p);
/// Psi^{-1}(1 - tail), solved against the tail directly so that probabilities
/// extremely close to 1 keep full relative accuracy.
double inv_psi_from_tail(double tail);

struct TailEnvelope {
  double lower;
  double upper;
};

/// Mills-ratio bracket for 1 - Phi(x); valid as a bracket for x > 1.
TailEnvelope tail_envelope(double x);

/// gamma_n(r B_2^n) = P(n/2, r^2/2).
double ball_measure(int n, double r);
/// 1 - gamma_n(r B_2^n).
double ball_measure_complement(int n, double r);
/// R with gamma_n(R B_2^n) = p.
double chi_quantile(int n, double p);

/// Carrier of p with h = Psi^{-1}(p) and w = -Phi^{-1}(p).
struct GaussScalarTable {
  double p;
  double h;
  double w;

  static GaussScalarTable from_probability(double p);
};

}  // namespace gaussbalance
