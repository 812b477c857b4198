#pragma once

// The one-parameter family C_theta of planar cones: symmetric about the
// x-axis, opening to the left, apex (y, 0) and rays through (-w, +-h), where
// h = Psi^{-1}(p) and w = -Phi^{-1}(p). m(theta) is the Gaussian measure of
// the part of C_theta in the upper half-plane.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaussbalance/parallel.hpp"

namespace gaussbalance {

struct ConeState {
  double p;
  double theta;
  double h;
  double w;
  double y;        // apex abscissa, h / tan(theta) - w
  double y_prime;  // |PY| = h / sin(theta)
  double h_y;      // y sin(theta)
  double w_y;      // h sin(theta) + w cos(theta)
  double u;        // y cos(theta)
  double lambda_theta;           // E(N | N > -u) = pdf(u) / cdf(u)
  std::optional<double> theta0;  // arctan(h / w); only for p < 1/2
};

ConeState cone_state(double p, double theta);

/// gamma_2(C_theta intersected with the upper half-plane).
double m_theta(double p, double theta, double abs_tol = 1e-14);

/// Closed-form derivative cdf(u) pdf(h_y) (lambda_theta - w_y).
double m_prime(const ConeState& state);

struct DerivativeCheck {
  double p;
  double theta;
  double closed_form;
  double finite_difference;  // (m(theta + step) - m(theta - step)) / (2 step)
  double rel_error;          // |difference| / max(|closed_form|, 1e-8)
  double abs_error;
  double truncation_bound;   // step^2 |m'''| / 6 plus quadrature noise / step

  /// rel_error <= rel_tol, or, where m' is too small for a relative
  /// comparison, the difference is within twice the stencil's own error.
  bool consistent(double rel_tol) const { return rel_error <= rel_tol || abs_error <= 2.0 * truncation_bound; }
};

DerivativeCheck check_derivative(double p, double theta, double step = 1e-4);

/// `per_p` seeded random angles in [0.01, pi/2 - 0.01] for each p.
std::vector<DerivativeCheck> derivative_suite(const std::vector<double>& ps, int per_p, std::uint64_t seed,
                                              Exec exec = Exec::parallel);

/// Grid of `points` angles evenly spaced on [1e-3, pi/2 - 1e-3].
std::vector<double> theta_grid(int points);

struct CriticalPointReport {
  double theta_star;
  double m_at_star;
  int sign_changes;
};

/// Counts sign flips of m' on the standard grid and bisects the first
/// negative-to-positive flip down to width 1e-10. Requires 0 < p <= 1/2.
CriticalPointReport find_critical_theta(double p, int grid, Exec exec = Exec::parallel);

/// (h^2 + w x)(x^3 + 2 x h^2 - w h^2) - h^2 (x - w): the quantity whose
/// positivity gives m'' > 0 at critical points with positive apex.
double lem5_value(double h, double w, double x);

/// Smallest x for which the lem5 inequality is needed: x > w and
/// x^2 + h^2 > 2/pi (every critical point with positive apex satisfies both).
double lem5_critical_region_start(double p);

struct Lem5Violation {
  double x;
  double value;
};

std::vector<Lem5Violation> check_lem5_inequality(double p, std::span<const double> x_grid);

struct Claim7Result {
  bool holds;
  double theta_star;
  double y;
  double y_prime_sq;
  double margin;  // (y')^2 - 2/pi
};

Claim7Result check_claim7(double p, int grid = 1000);

struct Claim8Violation {
  double p;
  double product_form;       // (h^2 + w^2)(2/pi + h^2) - h^2
  double intermediate_form;  // h^2 + w^2 + (7/11) w^2 / h^2 - 4/11
};

double claim8_product_form(double p);
double claim8_intermediate_form(double p);
std::vector<Claim8Violation> check_claim8(std::span<const double> p_grid);

struct SweepReport {
  double p;
  int points;
  double max_excess;    // max over the grid of m(theta) - p/2
  double argmax_theta;
  double max_double_m;  // max of 2 m(theta) = gamma_2(C_theta)
  double q;             // Phi(sqrt(2) Phi^{-1}(p)); NaN for p <= 1/2
  bool holds;           // p <= 1/2: max_excess < 0.  p > 1/2: max_double_m <= q (conjecture)
};

/// Phi(sqrt(2) Phi^{-1}(p)).
double q_of_p(double p);

SweepReport sweep_verify(double p, int theta_points, Exec exec = Exec::parallel);

}  // namespace gaussbalance
