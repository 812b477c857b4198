#include "gaussbalance/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaussbalance/cones.hpp"
#include "gaussbalance/gaussian.hpp"

namespace gaussbalance {
namespace {

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error(std::string(what) + ": p must lie in (0, 1)");
}

void require_upper_half(double p, const char* what) {
  if (!(p > 0.5 && p < 1.0)) throw std::domain_error(std::string(what) + ": requires 1/2 < p < 1");
}

void require_dimension(int n, const char* what) {
  if (n < 1) throw std::domain_error(std::string(what) + ": n must be positive");
}

}  // namespace

double f_theorem(double p) {
  require_probability(p, "f_theorem");
  return 0.5 / inv_psi(std::min(p, 0.5));
}

double f_alpha(double p) { return f_theorem(p); }

double f_beta(double p) {
  require_probability(p, "f_beta");
  return 5.0 * inv_psi(0.5) / inv_psi(std::min(p, 0.5));
}

double p_n(double p, int n) {
  require_upper_half(p, "p_n");
  require_dimension(n, "p_n");
  return cdf(inv_cdf(p) * std::pow(2.0, -0.5 * n));
}

double f_n(double p, int n) { return 0.5 / inv_psi(p_n(p, n)); }

double r_ball(double p, int n) {
  require_upper_half(p, "r_ball");
  require_dimension(n, "r_ball");
  return std::sqrt(static_cast<double>(n)) / (2.0 * inv_cdf(p));
}

double r_ball_literal(double p, int n) { return 2.0 * r_ball(p, n); }

double t_pn(double p, int n) {
  require_probability(p, "t_pn");
  require_dimension(n, "t_pn");
  // p^{1/n} = 1 - tail with the tail formed without cancellation.
  return inv_psi_from_tail(-std::expm1(std::log(p) / n));
}

double dimension_ratio(double p, int n) { return t_pn(p, n) / (2.0 * inv_psi(p)); }

BoundProfile bound_profile(double p, const std::vector<int>& n_list) {
  require_probability(p, "bound_profile");
  BoundProfile b{p, f_theorem(p), f_alpha(p), f_beta(p), std::nullopt, {}, {}, {}};
  if (p > 0.5) b.q = q_of_p(p);
  for (int n : n_list) {
    b.t_pn[n] = t_pn(p, n);
    if (p > 0.5) {
      b.f_n[n] = f_n(p, n);
      b.r_ball[n] = r_ball(p, n);
    }
  }
  return b;
}

RatioInfimum ratio_infimum(int n, int grid, Exec exec) {
  if (n < 2) throw std::domain_error("ratio_infimum: requires n >= 2");
  if (grid < 3) throw std::invalid_argument("ratio_infimum: grid too small");
  const double lo = std::log(1e-8);
  const double hi = std::log(0.5);
  auto log_p = [&](int i) { return lo + (hi - lo) * i / (grid - 1); };
  const auto values = parallel_map(
      static_cast<std::size_t>(grid),
      [&](std::size_t i) { return dimension_ratio(std::exp(log_p(static_cast<int>(i))), n); }, exec);
  const auto best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());

  // Golden-section search in log p on the neighbouring grid cells.
  double a = log_p(std::max(best - 1, 0));
  double b = log_p(std::min(best + 1, grid - 1));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double lp) { return dimension_ratio(std::exp(lp), n); };
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int iter = 0; iter < 200 && b - a > 1e-12; ++iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  double arg = log_p(best);
  double val = values[static_cast<std::size_t>(best)];
  const double mid = 0.5 * (a + b);
  if (const double fm = f(mid); fm < val) {
    val = fm;
    arg = mid;
  }
  return {n, val, std::min(std::exp(arg), 0.5), val / std::sqrt(std::log(static_cast<double>(n)))};
}

std::vector<LimitRow> limit_lower_bounds(double p, const std::vector<int>& n_list) {
  require_probability(p, "limit_lower_bounds");
  std::vector<LimitRow> rows;
  const double L = std::abs(std::log1p(-p));
  for (int n : n_list) {
    require_dimension(n, "limit_lower_bounds");
    const double R = chi_quantile(n, p);
    const double rn = std::sqrt(static_cast<double>(n));
    LimitRow row{n, R, rn / R, rn / (2.0 * R), 1.0 - 2.0 * std::sqrt(L) / rn, n >= L, true};
    row.holds = !row.bound_applies || row.beta_ratio >= row.paper_bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gaussbalance
