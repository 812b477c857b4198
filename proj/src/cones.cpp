#include "gaussbalance/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaussbalance/gaussian.hpp"
#include "gaussbalance/quadrature.hpp"

namespace gaussbalance {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr double kWindow = 9.0;
constexpr double kGridMargin = 1e-3;

void require_angle(double theta) {
  if (!(theta > 0.0 && theta < kHalfPi)) throw std::domain_error("cone: theta must lie in (0, pi/2)");
}

}  // namespace

ConeState cone_state(double p, double theta) {
  require_angle(theta);
  const auto g = GaussScalarTable::from_probability(p);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  ConeState st{};
  st.p = p;
  st.theta = theta;
  st.h = g.h;
  st.w = g.w;
  st.y = g.h * c / s - g.w;
  st.y_prime = g.h / s;
  st.h_y = g.h * c - g.w * s;  // = y sin(theta)
  st.w_y = g.h * s + g.w * c;
  st.u = st.y * c;
  st.lambda_theta = pdf(st.u) / cdf(st.u);
  if (g.w > 0.0) st.theta0 = std::atan(g.h / g.w);
  return st;
}

double m_theta(double p, double theta, double abs_tol) {
  const ConeState st = cone_state(p, theta);
  const double slope = std::tan(theta);
  const double apex = st.y;
  const double upper = std::min(apex, kWindow);
  if (upper <= -kWindow) return 0.0;
  // Slice above the axis at abscissa x <= apex is [0, (apex - x) tan(theta)].
  auto integrand = [apex, slope](double x) {
    return pdf(x) * 0.5 * std::erf((apex - x) * slope / std::numbers::sqrt2);
  };
  std::vector<double> breaks{-kWindow};
  const double knee = apex - 8.0 / slope;
  if (knee > -kWindow && knee < upper) breaks.push_back(knee);
  breaks.push_back(upper);
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  opt.max_subdivisions = 20000;
  return integrate_panels(integrand, breaks, opt).value;
}

double m_prime(const ConeState& st) {
  // cdf(u) pdf(h_y) (lambda - w_y), written without dividing by cdf(u).
  return pdf(st.h_y) * (pdf(st.u) - st.w_y * cdf(st.u));
}

DerivativeCheck check_derivative(double p, double theta, double step) {
  if (!(theta - step > 0.0 && theta + step < 0.5 * std::numbers::pi))
    throw std::domain_error("check_derivative: stencil leaves (0, pi/2)");
  const double closed = m_prime(cone_state(p, theta));
  const double fd = (m_theta(p, theta + step) - m_theta(p, theta - step)) / (2.0 * step);
  const double diff = std::abs(closed - fd);
  // m''' from second differences of the closed-form m'.
  const double s = std::min({1e-3, 0.5 * (theta - step), 0.5 * (0.5 * std::numbers::pi - theta - step)});
  const double third = (m_prime(cone_state(p, theta + s)) - 2.0 * closed + m_prime(cone_state(p, theta - s))) / (s * s);
  const double bound = step * step * std::abs(third) / 6.0 + 1e-13 / step;
  return {p, theta, closed, fd, diff / std::max(std::abs(closed), 1e-8), diff, bound};
}

std::vector<DerivativeCheck> derivative_suite(const std::vector<double>& ps, int per_p, std::uint64_t seed,
                                              Exec exec) {
  const std::size_t total = ps.size() * static_cast<std::size_t>(std::max(per_p, 0));
  return parallel_map(
      total,
      [&](std::size_t i) {
        auto rng = item_rng(seed, i);
        std::uniform_real_distribution<double> angle(0.01, 0.5 * std::numbers::pi - 0.01);
        return check_derivative(ps[i / static_cast<std::size_t>(per_p)], angle(rng));
      },
      exec);
}

std::vector<double> theta_grid(int points) {
  if (points < 2) throw std::invalid_argument("theta_grid: need at least two points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double lo = kGridMargin;
  const double hi = kHalfPi - kGridMargin;
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

CriticalPointReport find_critical_theta(double p, int grid, Exec exec) {
  if (!(p > 0.0 && p <= 0.5)) throw std::domain_error("find_critical_theta: requires 0 < p <= 1/2");
  const auto thetas = theta_grid(grid);
  const auto slopes = parallel_map(
      thetas.size(), [&](std::size_t i) { return m_prime(cone_state(p, thetas[i])); }, exec);

  int sign_changes = 0;
  std::size_t first = thetas.size();
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    if ((slopes[i - 1] < 0.0 && slopes[i] > 0.0) || (slopes[i - 1] > 0.0 && slopes[i] < 0.0)) {
      ++sign_changes;
      if (first == thetas.size()) first = i;
    }
  }
  if (sign_changes == 0) throw std::runtime_error("find_critical_theta: m' has no sign change on the grid");

  double lo = thetas[first - 1];
  double hi = thetas[first];
  const bool rising = slopes[first - 1] < 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const double d = m_prime(cone_state(p, mid));
    if ((d < 0.0) == rising)
      lo = mid;
    else
      hi = mid;
  }
  const double star = 0.5 * (lo + hi);
  return {star, m_theta(p, star), sign_changes};
}

double lem5_value(double h, double w, double x) {
  const double h2 = h * h;
  return (h2 + w * x) * (x * x * x + 2.0 * x * h2 - w * h2) - h2 * (x - w);
}

double lem5_critical_region_start(double p) {
  const auto g = GaussScalarTable::from_probability(p);
  return std::max(g.w, std::sqrt(std::max(0.0, kTwoOverPi - g.h * g.h)));
}

std::vector<Lem5Violation> check_lem5_inequality(double p, std::span<const double> x_grid) {
  if (!(p > 0.0 && p <= 0.5)) throw std::domain_error("check_lem5_inequality: requires 0 < p <= 1/2");
  const auto g = GaussScalarTable::from_probability(p);
  std::vector<Lem5Violation> out;
  for (double x : x_grid) {
    if (!(x > g.w)) throw std::domain_error("check_lem5_inequality: every x must exceed w");
    const double v = lem5_value(g.h, g.w, x);
    if (!(v > 0.0)) out.push_back({x, v});
  }
  return out;
}

Claim7Result check_claim7(double p, int grid) {
  const auto crit = find_critical_theta(p, grid);
  const auto st = cone_state(p, crit.theta_star);
  const double sq = st.y_prime * st.y_prime;
  const double margin = sq - kTwoOverPi;
  return {margin > 0.0 && crit.sign_changes == 1, crit.theta_star, st.y, sq, margin};
}

double claim8_product_form(double p) {
  const auto g = GaussScalarTable::from_probability(p);
  const double h2 = g.h * g.h;
  return (h2 + g.w * g.w) * (kTwoOverPi + h2) - h2;
}

double claim8_intermediate_form(double p) {
  const auto g = GaussScalarTable::from_probability(p);
  const double h2 = g.h * g.h;
  const double w2 = g.w * g.w;
  return h2 + w2 + (7.0 / 11.0) * w2 / h2 - 4.0 / 11.0;
}

std::vector<Claim8Violation> check_claim8(std::span<const double> p_grid) {
  std::vector<Claim8Violation> out;
  for (double p : p_grid) {
    if (!(p > 0.0 && p <= 0.5)) throw std::domain_error("check_claim8: requires 0 < p <= 1/2");
    const double prod = claim8_product_form(p);
    const double mid = claim8_intermediate_form(p);
    if (prod < 0.0 || mid < 0.0) out.push_back({p, prod, mid});
  }
  return out;
}

double q_of_p(double p) { return cdf(std::numbers::sqrt2 * inv_cdf(p)); }

SweepReport sweep_verify(double p, int theta_points, Exec exec) {
  const auto thetas = theta_grid(theta_points);
  const auto ms = parallel_map(thetas.size(), [&](std::size_t i) { return m_theta(p, thetas[i]); }, exec);
  SweepReport r{};
  r.p = p;
  r.points = theta_points;
  r.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const double excess = ms[i] - 0.5 * p;
    if (excess > r.max_excess) {
      r.max_excess = excess;
      r.argmax_theta = thetas[i];
    }
  }
  r.max_double_m = 2.0 * (r.max_excess + 0.5 * p);
  if (p <= 0.5) {
    r.q = std::numeric_limits<double>::quiet_NaN();
    r.holds = r.max_excess < 0.0;
  } else {
    r.q = q_of_p(p);
    r.holds = r.max_double_m <= r.q;
  }
  return r;
}

}  // namespace gaussbalance
