#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gaussbalance/bounds.hpp"
#include "gaussbalance/cones.hpp"
#include "oracles.hpp"

using namespace gaussbalance;

namespace {

double oracle_f(double p) {
  const oracle::real pp = p <= 0.5 ? p : 0.5L;
  return static_cast<double>(1.0L / (2.0L * oracle::inv_psi(pp)));
}

double oracle_t_pn(double p, int n) {
  return static_cast<double>(oracle::inv_psi(std::pow(static_cast<oracle::real>(p), 1.0L / n)));
}

double oracle_ratio(double p, int n) {
  return oracle_t_pn(p, n) / static_cast<double>(2.0L * oracle::inv_psi(p));
}

/// R with gamma_n(R B_2^n) = p, by bisection on the series oracle.
double oracle_chi_quantile(int n, double p) {
  return static_cast<double>(
      oracle::bisect([n](oracle::real r) { return oracle::ball_measure(n, r); }, p, 0.0L, 10.0L + 2.0L * std::sqrt(n)));
}

}  // namespace

TEST_CASE("bound_examples") {
  CHECK(f_theorem(0.5) == doctest::Approx(0.74130).epsilon(1e-5));
  CHECK(f_alpha(0.5) == doctest::Approx(0.74130).epsilon(1e-5));
  CHECK(f_beta(0.25) == doctest::Approx(10.583).epsilon(1e-4));
  CHECK(p_n(0.75, 2) == doctest::Approx(0.6320).epsilon(1e-4));
  CHECK(f_n(0.75, 2) == doctest::Approx(1.0 / (2.0 * static_cast<double>(oracle::inv_psi(p_n(0.75, 2))))).epsilon(1e-12));
  CHECK(f_beta(0.9) == 5.0);
}

TEST_CASE("bounds_match_oracle") {
  for (int i = 1; i < 200; ++i) {
    const double p = i / 200.0;
    CHECK(f_theorem(p) == doctest::Approx(oracle_f(p)).epsilon(1e-12));
    CHECK(f_alpha(p) == f_theorem(p));
    if (p <= 0.5) CHECK(f_beta(p) / f_alpha(p) == doctest::Approx(10.0 * static_cast<double>(oracle::inv_psi(0.5L))).epsilon(1e-12));
    for (int n : {1, 2, 5, 50}) CHECK(t_pn(p, n) == doctest::Approx(oracle_t_pn(p, n)).epsilon(1e-10));
    if (p > 0.5) {
      const double pn = static_cast<double>(oracle::cdf(std::ldexp(static_cast<oracle::real>(oracle::inv_cdf(p)), -1)));
      CHECK(p_n(p, 2) == doctest::Approx(pn).epsilon(1e-12));
      CHECK(r_ball(p, 4) == doctest::Approx(1.0 / static_cast<double>(oracle::inv_cdf(p))).epsilon(1e-12));
      CHECK(r_ball_literal(p, 4) == 2.0 * r_ball(p, 4));
      CHECK(q_of_p(p) == doctest::Approx(static_cast<double>(oracle::cdf(std::sqrt(2.0L) * oracle::inv_cdf(p)))).epsilon(1e-12));
    }
  }
}

TEST_CASE("bounds_are_non_increasing") {
  double prev_f = INFINITY, prev_b = INFINITY;
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    CHECK(f_theorem(p) <= prev_f);
    CHECK(f_beta(p) <= prev_b);
    prev_f = f_theorem(p);
    prev_b = f_beta(p);
  }
}

TEST_CASE("dimension_bound_tends_to_the_half_constant") {
  const double c = f_theorem(0.5);
  for (double p : {0.6, 0.75, 0.9, 0.99}) {
    // The gap shrinks like 2^{-n/2} Phi^{-1}(p); p = 0.99 needs a few more dimensions.
    CHECK(std::abs(f_n(p, p < 0.95 ? 40 : 44) - c) <= 1e-6);
    for (int n = 1; n < 40; ++n) CHECK(f_n(p, n) <= f_n(p, n + 1) + 1e-15);
  }
  // Ball bound against f_n at n = 5, p = 0.999: the halved radius comparison
  // holds, the literal one does not.
  CHECK(r_ball(0.999, 5) < f_n(0.999, 5));
  CHECK(r_ball_literal(0.999, 5) > f_n(0.999, 5));
}

TEST_CASE("ratio_infimum") {
  for (int n : {2, 10, 100, 10000, 1000000}) {
    const RatioInfimum s = ratio_infimum(n, 400, Exec::serial);
    const RatioInfimum p = ratio_infimum(n, 400, Exec::parallel);
    INFO("n=" << n);
    CHECK(s.inf_value == p.inf_value);
    CHECK(s.argmin_p == p.argmin_p);
    CHECK(s.inf_value <= oracle_ratio(0.5, n) * (1.0 + 1e-12));
    CHECK(s.argmin_p > 1e-8);
    CHECK(s.argmin_p <= 0.5);
    CHECK(s.inf_value == doctest::Approx(oracle_ratio(s.argmin_p, n)).epsilon(1e-9));
    // A dense independent scan never beats the refined minimum.
    double scan = INFINITY;
    const double lo = -8.0, hi = std::log10(0.5);
    for (int i = 1; i <= 2000; ++i) scan = std::min(scan, dimension_ratio(std::pow(10.0, lo + (hi - lo) * i / 2000.0), n));
    CHECK(s.inf_value <= scan * (1.0 + 1e-9));
    if (n >= 100) {
      CHECK(s.normalized >= 0.2);
      CHECK(s.normalized <= 5.0);
      CHECK(2.0 * s.inf_value >= std::sqrt(std::log(static_cast<double>(n))));
    }
  }
}

TEST_CASE("limit_rows") {
  const auto rows = limit_lower_bounds(0.99, {10, 100, 1000});
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.radius == doctest::Approx(oracle_chi_quantile(r.n, 0.99)).epsilon(1e-9));
    CHECK(r.alpha_ratio == r.beta_ratio / 2.0);
    CHECK(r.bound_applies);
    CHECK(r.holds);
    CHECK(r.beta_ratio >= r.paper_bound);
    CHECK(r.beta_ratio < 1.0);
    if (i > 0) CHECK(r.beta_ratio > rows[i - 1].beta_ratio);
  }
  CHECK(rows[2].paper_bound == doctest::Approx(1.0 - 2.0 * std::sqrt(std::log(100.0)) / std::sqrt(1000.0)).epsilon(1e-12));
  CHECK(rows[2].paper_bound == doctest::Approx(0.8643).epsilon(1e-3));
  const auto small = limit_lower_bounds(0.999999, {2});
  CHECK_FALSE(small[0].bound_applies);
}

TEST_CASE("bound_profile") {
  const BoundProfile lo = bound_profile(0.25, {2, 3});
  CHECK_FALSE(lo.q.has_value());
  CHECK(lo.f_n.empty());
  CHECK(lo.r_ball.empty());
  CHECK(lo.t_pn.size() == 2);
  const BoundProfile hi = bound_profile(0.75, {2, 3});
  REQUIRE(hi.q.has_value());
  CHECK(*hi.q == q_of_p(0.75));
  CHECK(hi.f_n.at(2) == f_n(0.75, 2));
  CHECK(hi.r_ball.at(3) == r_ball(0.75, 3));
  CHECK(hi.t_pn.at(3) == t_pn(0.75, 3));
}

TEST_CASE("bound_domain_errors") {
  CHECK_THROWS(f_theorem(0.0));
  CHECK_THROWS(f_beta(1.0));
  CHECK_THROWS(p_n(0.4, 2));
  CHECK_THROWS(f_n(0.5, 2));
  CHECK_THROWS(r_ball(0.3, 2));
  CHECK_THROWS(t_pn(0.5, 0));
  CHECK_THROWS(ratio_infimum(1));
  CHECK_THROWS(bound_profile(1.5, {2}));
  CHECK_THROWS(limit_lower_bounds(0.0, {2}));
}
