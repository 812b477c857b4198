#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gaussbalance/counterexample.hpp"
#include "gaussbalance/regions.hpp"
#include "oracles.hpp"

using namespace gaussbalance;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec vec(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

/// C_{d,t} is the triangle (0,0), (-td, d), (td, d) in the plane.
double oracle_distance(const Vec& q, double d, double t) {
  const double vx[3] = {0.0, -t * d, t * d};
  const double vy[3] = {0.0, d, d};
  return oracle::triangle_distance(q[0], q[1], vx, vy);
}

/// Planar cone measure by one-dimensional Simpson on the axis coordinate.
double oracle_planar_cone(double d, double t) {
  const oracle::real top = std::min<oracle::real>(d, 12.0L);
  if (top <= 0) return 0.0;
  return static_cast<double>(oracle::simpson([&](oracle::real z) { return oracle::pdf(z) * oracle::psi(t * z); },
                                             {0.0L, top}, 20000));
}

}  // namespace

TEST_CASE("cone_measure_examples") {
  CHECK(cone_measure(2, 0.0, 1.3) == 0.0);
  for (double t : {0.2, 1.0, 3.0}) {
    CHECK(cone_measure(2, kInf, t) == doctest::Approx(oracle_planar_cone(kInf, t)).epsilon(1e-9));
    CHECK(cone_measure(2, 1.5, t) == doctest::Approx(oracle_planar_cone(1.5, t)).epsilon(1e-9));
    // The unbounded planar cone of half-angle arctan(t) has measure arctan(t)/pi.
    CHECK(cone_measure(2, kInf, t) == doctest::Approx(std::atan(t) / std::numbers::pi).epsilon(1e-9));
  }
  const double t = 1.0;
  const auto mc2 = oracle::gaussian_probability(2, 1000000, 61, [&](const std::vector<double>& x) {
    return x[1] >= 0.0 && std::abs(x[0]) <= t * x[1];
  });
  CHECK(std::abs(cone_measure(2, kInf, t) - mc2.mean) <= 4.0 * mc2.standard_error);
  const auto mc3 = oracle::gaussian_probability(3, 1000000, 62, [&](const std::vector<double>& x) {
    return x[2] >= 0.0 && x[2] <= 10.0 && std::hypot(x[0], x[1]) <= 2.0 * x[2];
  });
  CHECK(std::abs(cone_measure(3, 10.0, 2.0) - mc3.mean) <= 4.0 * mc3.standard_error);
}

TEST_CASE("cone_measure_agrees_with_ehrhard_route") {
  for (double t : {0.5, 2.0}) {
    const EhrhardResult e = ehrhard_symmetrize(ConeBody{3, 4.0, t});
    CHECK(gamma2_region(e.region) == doctest::Approx(cone_measure(3, 4.0, t)).epsilon(1e-4));
  }
}

TEST_CASE("shifted_cone_measure") {
  for (double s : {0.5, 0.1, 0.001}) {
    const double g = cone_measure(2, 8.0, 1.2), gs = shifted_cone_measure(2, 8.0, 1.2, s);
    // Shifting down by s moves mass at most the width of a band of height s.
    CHECK(gs >= g - s / std::sqrt(2.0 * std::numbers::pi) - 1e-12);
    CHECK(gs > g);
  }
  const auto mc = oracle::gaussian_probability(2, 400000, 63, [](const std::vector<double>& x) {
    const double z = x[1] + 0.3;
    return z >= 0.0 && z <= 5.0 && std::abs(x[0]) <= 1.5 * z;
  });
  CHECK(std::abs(shifted_cone_measure(2, 5.0, 1.5, 0.3) - mc.mean) <= 4.0 * mc.standard_error);
}

TEST_CASE("distance_to_cone") {
  // Below the apex the nearest point is the apex; level with it, the lateral edge.
  CHECK(dist_to_cone(vec({0, -1}), 5, 1) == doctest::Approx(1.0));
  CHECK(dist_to_cone(vec({-1, 0}), 5, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(dist_to_cone(vec({-1, 0}), 5, 0.01) == doctest::Approx(1.0 / std::sqrt(1.0001)));
  CHECK(dist_to_cone(vec({0, 1}), 5, 1) == 0.0);
  CHECK(dist_to_cone(vec({0.5, 4}), 5, 1) == 0.0);
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> coord(-4.0, 8.0), slope(0.05, 3.0);
  for (int i = 0; i < 150; ++i) {
    const double t = slope(rng), d = 1.0 + 4.0 * std::abs(coord(rng)) / 8.0;
    const Vec q = vec({coord(rng), coord(rng)});
    CHECK(dist_to_cone(q, d, t) == doctest::Approx(oracle_distance(q, d, t)).epsilon(1e-6).scale(1e-7));
  }
  // Just right of the apex with a thin cone: nearly the distance to the ray pair.
  const double t = 0.01, eps = 0.001;
  CHECK(dist_to_cone(vec({1 + eps, 0}), 100, t) == doctest::Approx(oracle_distance(vec({1 + eps, 0}), 100, t)).epsilon(1e-6));
}

TEST_CASE("critical_aperture") {
  for (double p : {0.05, 0.25, 0.45}) {
    const double t = critical_aperture(p);
    CHECK(cone_measure(2, kInf, t) == doctest::Approx(p).epsilon(1e-9));
    CHECK(t == doctest::Approx(std::tan(std::numbers::pi * p)).epsilon(1e-8));
  }
}

TEST_CASE("counterexample_instances") {
  const std::vector<double> shifts = {1e-1, 1e-2, 1e-3};
  const auto inst = build_counterexample(0.25, shifts);
  REQUIRE(inst.size() == 3);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const auto& c = inst[i];
    INFO("s=" << c.s);
    CHECK(c.t > critical_aperture(0.25));
    CHECK(c.gamma - c.s / 2 > 0.25);
    CHECK(c.gamma_shifted >= 0.25);
    CHECK(c.beta_lb == c.delta / c.s);
    CHECK(c.delta > 0.0);
    CHECK(c.min_balance >= c.beta_lb - 1e-6);
    CHECK(c.ball_inside);
    CHECK(c.sums_outside);
    // Independent recomputation of the balance over the four signed sums.
    const ShiftedCone body(c.n, c.d, c.t, c.s);
    const double want = oracle::min_signed_sum(
        {{c.tuple[0][0], c.tuple[0][1]}, {c.tuple[1][0], c.tuple[1][1]}},
        [&](const std::vector<double>& v) { return body.gauge(vec({v[0], v[1]})); });
    CHECK(c.min_balance == doctest::Approx(want).epsilon(1e-10));
    for (const Vec& u : c.tuple.vectors()) CHECK(u.norm() <= 1.0 + 1e-12);
    if (i > 0) CHECK(c.beta_lb == doctest::Approx(10.0 * inst[i - 1].beta_lb).epsilon(1e-12));
  }
  CHECK(inst[0].beta_lb == doctest::Approx(10.0 * inst[0].delta));
}

TEST_CASE("counterexample_errors") {
  CHECK_THROWS(cone_measure(1, 1.0, 1.0));
  CHECK_THROWS(cone_measure(7, 1.0, 1.0));
  CHECK_THROWS(cone_measure(2, -1.0, 1.0));
  CHECK_THROWS(cone_measure(2, 1.0, 0.0));
  CHECK_THROWS(critical_aperture(0.5));
  CHECK_THROWS(build_counterexample(0.6, {0.1}));
  CHECK_THROWS(build_counterexample(0.25, {1.5}));
}
