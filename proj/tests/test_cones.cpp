#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gaussbalance/cones.hpp"
#include "gaussbalance/gaussian.hpp"
#include "oracles.hpp"

using namespace gaussbalance;

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

}  // namespace

TEST_CASE("cone_state_geometry") {
  const auto g = GaussScalarTable::from_probability(0.25);
  const double theta0 = std::atan(g.h / g.w);
  CHECK(theta0 == doctest::Approx(0.4413).epsilon(1e-3));
  CHECK(std::abs(cone_state(0.25, theta0).y) < 1e-10);
  const auto st = cone_state(0.25, 0.3);
  CHECK(std::abs(st.h_y * st.h_y + st.w_y * st.w_y - (g.h * g.h + g.w * g.w)) < 1e-10);
  CHECK(std::abs(cone_state(0.25, 0.001).w_y - g.w) < 1e-2);
  const auto end = cone_state(0.25, kHalfPi - 1e-6);
  CHECK(std::abs(end.h_y + g.w) < 1e-5);
  CHECK(std::abs(end.w_y - g.h) < 1e-5);
  CHECK(std::abs(st.u - st.y * std::cos(0.3)) < 1e-15);
  CHECK(*st.theta0 == doctest::Approx(theta0));
  CHECK_FALSE(cone_state(0.5, 0.3).theta0.has_value());
  CHECK_THROWS_AS(cone_state(0.25, 0.0), std::domain_error);
  CHECK_THROWS_AS(cone_state(0.25, kHalfPi), std::domain_error);
}

TEST_CASE("cone_measure_matches_simpson_oracle") {
  for (double p : {0.05, 0.25, 0.4, 0.5, 0.75, 0.9}) {
    for (double theta : {0.01, 0.2, 0.5, 0.9, 1.3, 1.56}) {
      INFO("p = " << p << ", theta = " << theta);
      CHECK(std::abs(m_theta(p, theta) - static_cast<double>(oracle::cone_half_measure(p, theta))) < 1e-12);
    }
  }
}

TEST_CASE("cone_measure_endpoint_limits_near_half_p") {
  for (double p : {0.1, 0.25, 0.4, 0.499, 0.6, 0.75, 0.9}) {
    INFO("p = " << p);
    CHECK(std::abs(m_theta(p, 0.002) - 0.5 * p) < 1e-2);
    CHECK(std::abs(m_theta(p, kHalfPi - 0.002) - 0.5 * p) < 1e-2);
  }
  CHECK(m_theta(0.25, 0.5) < 0.125);
}

TEST_CASE("cone_measure_derivative_closed_form_matches_oracle_difference") {
  for (double p : {0.1, 0.25, 0.5, 0.75}) {
    for (double theta : {0.05, 0.3, 0.7, 1.1, 1.5}) {
      const double closed = m_prime(cone_state(p, theta));
      const double fd = static_cast<double>(
          oracle::derivative([&](oracle::real t) { return oracle::cone_half_measure(p, t); }, theta,
                             std::min(1e-4, theta / 500.0)));
      INFO("p = " << p << ", theta = " << theta);
      CHECK(std::abs(closed - fd) < 1e-9);
    }
  }
  // Example from the module contract.
  const auto check = check_derivative(0.5, 0.7);
  CHECK(check.rel_error <= 1e-6);
}

TEST_CASE("cone_measure_derivative_limits") {
  const auto g = GaussScalarTable::from_probability(0.25);
  const double at_zero = -g.w * std::exp(-g.h * g.h / 2) / std::sqrt(2 * std::numbers::pi);
  CHECK(at_zero == doctest::Approx(-0.2559).epsilon(1e-3));
  CHECK(std::abs(m_prime(cone_state(0.25, 1e-6)) - at_zero) < 1e-5);
  // u -> 0, lambda -> sqrt(2/pi), h_y -> -w and w_y -> h give
  // m' -> exp(-w^2/2) / sqrt(8 pi) * (sqrt(2/pi) - h).
  const double at_half_pi =
      std::exp(-g.w * g.w / 2) / std::sqrt(8 * std::numbers::pi) * (std::sqrt(2.0 / std::numbers::pi) - g.h);
  CHECK(at_half_pi > 0.0);
  CHECK(std::abs(m_prime(cone_state(0.25, kHalfPi - 1e-6)) - at_half_pi) < 1e-5);
}

TEST_CASE("derivative_suite_is_seeded_and_thread_independent") {
  const auto a = derivative_suite({0.25, 0.5, 0.75}, 50, 42, Exec::parallel);
  const auto b = derivative_suite({0.25, 0.5, 0.75}, 50, 42, Exec::serial);
  REQUIRE(a.size() == 150);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].theta == b[i].theta);
    CHECK(a[i].closed_form == b[i].closed_form);
    CHECK(a[i].theta >= 0.01);
    CHECK(a[i].theta <= kHalfPi - 0.01);
    CHECK(a[i].rel_error <= 1e-5);
  }
  const auto c = derivative_suite({0.25}, 5, 43);
  CHECK(c[0].theta != a[0].theta);
}

TEST_CASE("derivative_consistency_falls_back_to_stencil_error_near_critical_point") {
  // Where m' is close to zero, the relative error measures the stencil, not
  // the formula; the absolute difference must stay within the stencil bound.
  const auto crit = find_critical_theta(0.25, 1000);
  const auto check = check_derivative(0.25, crit.theta_star + 1e-7);
  CHECK(check.abs_error <= 2.0 * check.truncation_bound);
  CHECK(check.consistent(1e-5));
}

TEST_CASE("theta_grid_spans_clipped_interval") {
  const auto grid = theta_grid(200);
  REQUIRE(grid.size() == 200);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(kHalfPi - 1e-3));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("unique_critical_point_below_half_p") {
  for (double p : {0.1, 0.25, 0.4, 0.499, 0.5}) {
    const auto crit = find_critical_theta(p, 1000);
    INFO("p = " << p);
    CHECK(crit.sign_changes == 1);
    CHECK(crit.m_at_star < 0.5 * p);
    CHECK(std::abs(m_prime(cone_state(p, crit.theta_star))) < 1e-8);
    const auto serial = find_critical_theta(p, 1000, Exec::serial);
    CHECK(serial.theta_star == crit.theta_star);
    CHECK(serial.sign_changes == crit.sign_changes);
  }
  CHECK_THROWS(find_critical_theta(0.75, 100));
}

TEST_CASE("critical_radius_exceeds_2_over_pi_when_apex_is_positive") {
  for (double p : {0.25, 0.4, 0.499}) {
    const auto c = check_claim7(p);
    INFO("p = " << p);
    CHECK(c.y > 0.0);
    CHECK(c.holds);
    CHECK(c.margin > 0.0);
    CHECK(std::abs(c.margin - (c.y_prime_sq - 2.0 / std::numbers::pi)) < 1e-15);
  }
  // For small p the critical angle lies beyond theta_0 (apex at y < 0): the
  // claim's hypothesis is not met there and the margin is negative.
  const auto small = check_claim7(0.1);
  CHECK(small.y < 0.0);
  CHECK(small.margin < 0.0);
}

TEST_CASE("quadratic_inequality_both_forms") {
  CHECK(claim8_product_form(0.25) > 0.0);
  CHECK(claim8_intermediate_form(0.25) > 0.0);
  const double h = inv_psi(0.5);
  CHECK(std::abs(claim8_product_form(0.5) - (h * h * (2.0 / std::numbers::pi + h * h) - h * h)) < 1e-15);
  CHECK(h * h >= 1.0 - 2.0 / std::numbers::pi);
  std::vector<double> grid;
  for (int i = 1; i <= 1000; ++i) grid.push_back(0.001 + 0.499 * i / 1000.0);
  CHECK(check_claim8(grid).empty());
  // Oracle evaluation of the product form.
  for (double p : {0.01, 0.1, 0.3, 0.45}) {
    const oracle::real ho = oracle::inv_psi(p), wo = -oracle::inv_cdf(p);
    const double expected = static_cast<double>((ho * ho + wo * wo) * (2.0L / oracle::kPi + ho * ho) - ho * ho);
    CHECK(std::abs(claim8_product_form(p) - expected) < 1e-12);
  }
}

TEST_CASE("cubic_inequality") {
  const auto g = GaussScalarTable::from_probability(0.25);
  CHECK(lem5_value(g.h, g.w, g.w + 0.5) > 0.0);
  // As x -> w+ the right-hand side h^2 (x - w) vanishes.
  const double near = lem5_value(g.h, g.w, g.w + 1e-12);
  const double lhs = (g.h * g.h + g.w * g.w) * (g.w * g.w * g.w + g.w * g.h * g.h);
  CHECK(std::abs(near - lhs) < 1e-10);
  std::vector<double> xs;
  const auto g499 = GaussScalarTable::from_probability(0.499);
  for (int i = 1; i <= 1000; ++i) xs.push_back(g499.w + 20.0 * i / 1000.0);
  // Unrestricted x: failures exist just above w, but only where
  // x^2 + h^2 <= 2/pi, a region no critical point reaches.
  const double x0 = lem5_critical_region_start(0.499);
  const auto raw = check_lem5_inequality(0.499, xs);
  CHECK_FALSE(raw.empty());
  for (const auto& v : raw) CHECK(v.x < x0);
  std::vector<double> critical;
  for (int i = 1; i <= 1000; ++i) critical.push_back(x0 + (g499.w + 20.0 - x0) * i / 1000.0);
  CHECK(check_lem5_inequality(0.499, critical).empty());
  const std::vector<double> bad = {g.w - 0.1};
  CHECK_THROWS_AS(check_lem5_inequality(0.25, bad), std::domain_error);
}

TEST_CASE("cubic_inequality_failures_lie_outside_critical_region_property") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pd(0.001, 0.5);
  std::uniform_real_distribution<double> offset(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double p = pd(rng);
    const auto g = GaussScalarTable::from_probability(p);
    const double x0 = lem5_critical_region_start(p);
    CHECK(x0 >= g.w);
    CHECK(x0 * x0 + g.h * g.h >= 2.0 / std::numbers::pi - 1e-12);
    for (int j = 0; j < 20; ++j) {
      const double x = x0 + 1e-9 + 20.0 * offset(rng);
      INFO("p = " << p << ", x = " << x);
      CHECK(lem5_value(g.h, g.w, x) > 0.0);
    }
  }
}

TEST_CASE("cone_sweep") {
  for (double p : {0.1, 0.25, 0.4, 0.499}) {
    const auto r = sweep_verify(p, 200);
    INFO("p = " << p);
    CHECK(r.points == 200);
    CHECK(r.max_excess < 0.0);
    CHECK(r.holds);
    CHECK(std::isnan(r.q));
    const auto serial = sweep_verify(p, 200, Exec::serial);
    CHECK(serial.max_excess == r.max_excess);
    CHECK(serial.argmax_theta == r.argmax_theta);
  }
  const auto high = sweep_verify(0.75, 200);
  CHECK(high.max_double_m > 0.75);
  CHECK(high.q == doctest::Approx(0.8299).epsilon(1e-3));
  CHECK(high.max_double_m <= high.q);
  CHECK(q_of_p(0.75) == doctest::Approx(static_cast<double>(oracle::cdf(std::sqrt(2.0L) * oracle::inv_cdf(0.75L)))));
}

TEST_CASE("cone_measure_convex_beyond_theta0_property") {
  std::mt19937_64 rng(11);
  for (double p : {0.05, 0.2, 0.35, 0.45}) {
    const double theta0 = *cone_state(p, 0.5).theta0;
    std::uniform_real_distribution<double> angle(theta0, kHalfPi - 1e-3);
    for (int i = 0; i < 100; ++i) {
      const double a = angle(rng), b = angle(rng);
      const double gap = m_theta(p, 0.5 * (a + b)) - 0.5 * (m_theta(p, a) + m_theta(p, b));
      INFO("p = " << p << ", a = " << a << ", b = " << b);
      CHECK(gap <= 1e-12);
    }
  }
}

TEST_CASE("cone_measure_below_half_p_property") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> pd(0.01, 0.5);
  std::uniform_real_distribution<double> angle(1e-3, kHalfPi - 1e-3);
  for (int i = 0; i < 500; ++i) {
    const double p = pd(rng), theta = angle(rng);
    INFO("p = " << p << ", theta = " << theta);
    CHECK(m_theta(p, theta) < 0.5 * p);
  }
}
