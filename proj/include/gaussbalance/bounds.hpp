#pragma once

// Closed-form bound functions in p and their dimension-dependent variants.

#include <map>
#include <optional>
#include <vector>

#include "gaussbalance/parallel.hpp"

namespace gaussbalance {

/// (2 Psi^{-1}(p))^{-1} for p <= 1/2, constant (2 Psi^{-1}(1/2))^{-1} above.
double f_theorem(double p);
/// The lattice bound; shares the formula of f_theorem.
double f_alpha(double p);
/// 5 Psi^{-1}(1/2) / Psi^{-1}(p) for p <= 1/2, constant 5 above.
double f_beta(double p);
/// Phi(2^{-n/2} Phi^{-1}(p)); requires p > 1/2.
double p_n(double p, int n);
/// (2 Psi^{-1}(p_n))^{-1}; requires p > 1/2.
double f_n(double p, int n);
/// sqrt(n) / (2 Phi^{-1}(p)): the balancing bound from the inscribed ball of
/// radius Phi^{-1}(p); requires p > 1/2.
double r_ball(double p, int n);
/// sqrt(n) / Phi^{-1}(p), the comparison quantity as literally written.
double r_ball_literal(double p, int n);
/// Psi^{-1}(p^{1/n}).
double t_pn(double p, int n);
/// Psi^{-1}(p^{1/n}) / (2 Psi^{-1}(p)).
double dimension_ratio(double p, int n);

struct BoundProfile {
  double p;
  double f;
  double f_alpha;
  double f_beta;
  std::optional<double> q;     // p > 1/2 only
  std::map<int, double> f_n;   // p > 1/2 only
  std::map<int, double> t_pn;
  std::map<int, double> r_ball;  // p > 1/2 only
};

BoundProfile bound_profile(double p, const std::vector<int>& n_list);

struct RatioInfimum {
  int n;
  double inf_value;
  double argmin_p;
  double normalized;  // inf_value / sqrt(ln n)
};

/// inf over p in (1e-8, 1/2] of dimension_ratio(p, n): log-spaced grid,
/// then golden-section refinement around the best grid point.
RatioInfimum ratio_infimum(int n, int grid = 400, Exec exec = Exec::parallel);

struct LimitRow {
  int n;
  double radius;       // R_p(n) = chi_quantile(n, p)
  double beta_ratio;   // sqrt(n) / R_p
  double alpha_ratio;  // sqrt(n) / (2 R_p)
  double paper_bound;  // 1 - 2 sqrt|ln(1-p)| / sqrt(n)
  bool bound_applies;  // n >= |ln(1-p)|
  bool holds;
};

std::vector<LimitRow> limit_lower_bounds(double p, const std::vector<int>& n_list);

}  // namespace gaussbalance
