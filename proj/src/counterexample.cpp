#include "gaussbalance/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaussbalance/gaussian.hpp"
#include "gaussbalance/quadrature.hpp"

namespace gaussbalance {
namespace {

constexpr double kTruncation = 12.0;  // pdf mass beyond this is below 1e-32

double section_integral(int n, double lo, double hi, double t, double shift) {
  if (!(hi > lo)) return 0.0;
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.max_subdivisions = 20000;
  auto f = [n, t, shift](double z) { return pdf(z) * ball_measure(n - 1, std::max(0.0, t * (z + shift))); };
  return integrate(f, lo, hi, opt).value;
}

void check_cone_args(int n, double d, double t) {
  if (n < 2 || n > 6) throw std::domain_error("cone_measure: requires 2 <= n <= 6");
  if (!(d >= 0.0)) throw std::domain_error("cone_measure: requires d >= 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("cone_measure: requires finite t > 0");
}

}  // namespace

double cone_measure(int n, double d, double t) {
  check_cone_args(n, d, t);
  return section_integral(n, 0.0, std::min(d, kTruncation), t, 0.0);
}

double shifted_cone_measure(int n, double d, double t, double s) {
  check_cone_args(n, d, t);
  if (!(s >= 0.0)) throw std::domain_error("shifted_cone_measure: requires s >= 0");
  return section_integral(n, std::max(-s, -kTruncation), std::min(d - s, kTruncation), t, s);
}

double dist_to_cone(const Vec& point, double d, double t) {
  if (point.size() != 2) throw std::invalid_argument("dist_to_cone: planar points only");
  if (!(d > 0.0) || !(t > 0.0)) throw std::domain_error("dist_to_cone: requires d, t > 0");
  const Eigen::Vector2d x(point[0], point[1]);
  if (x[1] >= 0.0 && x[1] <= d && std::abs(x[0]) <= t * x[1]) return 0.0;
  // Outside a convex triangle the distance is the distance to its boundary.
  const Eigen::Vector2d apex(0.0, 0.0), left(-t * d, d), right(t * d, d);
  auto segment = [&x](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double u = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (x - (a + u * ab)).norm();
  };
  return std::min({segment(apex, left), segment(apex, right), segment(left, right)});
}

double critical_aperture(double p) {
  if (!(p > 0.0 && p < 0.5)) throw std::domain_error("critical_aperture: requires 0 < p < 1/2");
  const double inf = std::numeric_limits<double>::infinity();
  double lo = 0.0, hi = 1.0;
  while (cone_measure(2, inf, hi) < p) {
    hi *= 2.0;
    if (hi > 1e12) throw std::runtime_error("critical_aperture: bracket search failed");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (cone_measure(2, inf, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<CounterexampleInstance> build_counterexample(double p, const std::vector<double>& s_list) {
  if (!(p > 0.0 && p < 0.5)) throw std::domain_error("build_counterexample: requires 0 < p < 1/2");
  const int n = 2;
  const double inf = std::numeric_limits<double>::infinity();

  // Aperture above t_p: aim the unbounded cone at measure (p + 1/2) / 2.
  const double t_p = critical_aperture(p);
  const double target = 0.5 * (p + 0.5);
  double t = t_p;
  {
    double lo = t_p, hi = 2.0 * t_p + 1.0;
    while (cone_measure(n, inf, hi) < target) hi *= 2.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (cone_measure(n, inf, mid) < target ? lo : hi) = mid;
    }
    t = 0.5 * (lo + hi);
  }
  if (!(t > t_p)) throw std::runtime_error("build_counterexample: aperture search failed");

  // Height: contain a translate of n B_2^n (centre on the axis, 1% clearance
  // from the lateral rays), then grow until the truncation costs < 1e-9.
  const double radius = n;
  const double ball_height = 1.01 * radius * std::sqrt(1.0 + t * t) / t;
  const double unbounded = cone_measure(n, inf, t);
  double d = ball_height + 1.01 * radius;
  while (cone_measure(n, d, t) < unbounded - 1e-9) d += 1.0;
  const double gamma = cone_measure(n, d, t);
  if (!(gamma > p)) throw std::runtime_error("build_counterexample: cone measure does not exceed p");

  bool ball_inside = true;
  for (int k = 0; k < 720; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / 720.0;
    Vec q(2);
    q << radius * std::cos(phi), ball_height + radius * std::sin(phi);
    ball_inside = ball_inside && dist_to_cone(q, d, t) == 0.0;
  }

  // Tuple {e_1, a e_2} with a t < 1: every signed sum misses the cone.
  const double a = std::min(1.0, 1.0 / (4.0 * t));
  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1[0] = 1.0;
  e2[1] = a;
  const VectorTuple tuple({e1, e2});
  double delta = inf;
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) delta = std::min(delta, dist_to_cone(s1 * e1 + s2 * e2, d, t));

  std::vector<CounterexampleInstance> out;
  for (double s : s_list) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("build_counterexample: shifts must lie in (0, 1)");
    const ShiftedCone body(n, d, t, s);
    const BalanceResult bal = min_sign_balance(tuple, body, Exec::serial);
    bool outside = true;
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) outside = outside && !body.contains(s1 * e1 + s2 * e2);
    out.push_back({n, p, t, d, s, gamma, shifted_cone_measure(n, d, t, s), delta, delta / s, bal.value, tuple,
                   ball_height, ball_inside, outside});
  }
  return out;
}

}  // namespace gaussbalance
