#include "gaussbalance/gaussian.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "gaussbalance/roots.hpp"

namespace gaussbalance {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
// Below this, cdf(x) underflows to zero.
constexpr double kQuantileFloor = -39.0;

void require_probability(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0))
    throw std::domain_error(std::string(what) + ": probability must lie in (0, 1), got " +
                            std::to_string(q));
}

// Abramowitz & Stegun 26.2.23 starting point for the lower quantile (q < 1/2).
double lower_quantile_guess(double q) {
  const double t = std::sqrt(-2.0 * std::log(q));
  const double num = 2.515517 + t * (0.802853 + t * 0.010328);
  const double den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308));
  return -(t - num / den);
}

// Solves log Phi(x) = log q; the log form keeps Newton well scaled deep in the tail.
double lower_quantile(double q) {
  const double log_q = std::log(q);
  auto eval = [log_q](double x) {
    const double c = cdf(x);
    if (c <= 0.0) return std::pair{-std::numeric_limits<double>::infinity(), 0.0};
    return std::pair{std::log(c) - log_q, pdf(x) / c};
  };
  return detail::bracketed_newton(eval, kQuantileFloor, 0.0, lower_quantile_guess(q));
}

}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double ccdf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double inv_cdf(double q) {
  require_probability(q, "inv_cdf");
  if (q == 0.5) return 0.0;
  // 1 - q is exact for q in [1/2, 1).
  if (q > 0.5) return -lower_quantile(1.0 - q);
  return lower_quantile(q);
}

double psi(double x) {
  if (x < 0.0) throw std::domain_error("psi: argument must be non-negative");
  return std::erf(x / kSqrt2);
}

double inv_psi(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("inv_psi: p must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  if (p > 0.5) return inv_psi_from_tail(1.0 - p);
  auto eval = [p](double x) { return std::pair{psi(x) - p, 2.0 * pdf(x)}; };
  const double guess = p < 1e-6 ? p * std::sqrt(std::numbers::pi / 2.0) : inv_cdf(0.5 + 0.5 * p);
  return detail::bracketed_newton(eval, 0.0, 1.0, guess);
}

double inv_psi_from_tail(double tail) {
  if (!(tail > 0.0 && tail <= 1.0)) throw std::domain_error("inv_psi_from_tail: tail must lie in (0, 1]");
  if (tail == 1.0) return 0.0;
  if (tail >= 0.5) return inv_psi(1.0 - tail);
  const double log_tail = std::log(tail);
  auto eval = [log_tail](double x) {
    const double upper = std::erfc(x / kSqrt2);
    if (upper <= 0.0) return std::pair{std::numeric_limits<double>::infinity(), 0.0};
    return std::pair{log_tail - std::log(upper), 2.0 * pdf(x) / upper};
  };
  return detail::bracketed_newton(eval, 0.0, -kQuantileFloor, -lower_quantile(0.5 * tail));
}

TailEnvelope tail_envelope(double x) {
  if (!(x > 0.0)) throw std::domain_error("tail_envelope: x must be positive");
  const double upper = pdf(x) / x;
  return {upper * (1.0 - 1.0 / (x * x)), upper};
}

double ball_measure(int n, double r) {
  if (n < 1) throw std::domain_error("ball_measure: dimension must be >= 1");
  if (!(r >= 0.0)) throw std::domain_error("ball_measure: radius must be non-negative");
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) return 1.0;
  return boost::math::gamma_p(0.5 * n, 0.5 * r * r);
}

double ball_measure_complement(int n, double r) {
  if (n < 1) throw std::domain_error("ball_measure_complement: dimension must be >= 1");
  if (!(r >= 0.0)) throw std::domain_error("ball_measure_complement: radius must be non-negative");
  if (r == 0.0) return 1.0;
  if (std::isinf(r)) return 0.0;
  return boost::math::gamma_q(0.5 * n, 0.5 * r * r);
}

double chi_quantile(int n, double p) {
  if (n < 1) throw std::domain_error("chi_quantile: dimension must be >= 1");
  require_probability(p, "chi_quantile");
  const double a = 0.5 * n;
  const bool upper = p > 0.5;
  auto eval = [a, p, upper](double r) {
    const double x = 0.5 * r * r;
    const double f = upper ? (1.0 - p) - boost::math::gamma_q(a, x) : boost::math::gamma_p(a, x) - p;
    return std::pair{f, boost::math::gamma_p_derivative(a, x) * r};
  };
  double hi = std::sqrt(static_cast<double>(n)) + 2.0 * std::sqrt(std::abs(std::log1p(-p))) + 2.0;
  while (eval(hi).first < 0.0) hi *= 2.0;
  // Wilson-Hilferty starting point.
  const double k = 2.0 / (9.0 * n);
  const double cube = 1.0 - k + inv_cdf(p) * std::sqrt(k);
  const double guess = cube > 0.0 ? std::sqrt(n * cube * cube * cube) : 0.5 * hi;
  return detail::bracketed_newton(eval, 0.0, hi, guess);
}

GaussScalarTable GaussScalarTable::from_probability(double p) {
  require_probability(p, "GaussScalarTable");
  return {p, inv_psi(p), p == 0.5 ? 0.0 : -inv_cdf(p)};
}

}  // namespace gaussbalance
