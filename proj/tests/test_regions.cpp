#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gaussbalance/counterexample.hpp"
#include "gaussbalance/gaussian.hpp"
#include "gaussbalance/regions.hpp"
#include "oracles.hpp"

using namespace gaussbalance;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Boundary rebuilt from the knot list, clipped like the library's quadrature.
oracle::real knot_boundary(const HypographRegion& r, oracle::real y) {
  const auto& k = r.knots();
  oracle::real t;
  if (y < k.front().y) {
    if (!r.left_slope()) return -kInf;
    t = k.front().t + *r.left_slope() * (y - k.front().y);
  } else if (y > k.back().y) {
    if (!r.right_slope()) return -kInf;
    t = k.back().t + *r.right_slope() * (y - k.back().y);
  } else {
    std::size_t i = 1;
    while (i + 1 < k.size() && k[i].y < y) ++i;
    if (k.size() == 1) return k[0].t;
    const oracle::real s = (k[i].t - k[i - 1].t) / static_cast<oracle::real>(k[i].y - k[i - 1].y);
    t = k[i - 1].t + s * (y - k[i - 1].y);
  }
  return std::min<oracle::real>(t, r.clip());
}

double oracle_measure(const HypographRegion& r) {
  std::vector<oracle::real> breaks;
  for (const auto& k : r.knots()) breaks.push_back(k.y);
  return static_cast<double>(oracle::hypograph_measure([&](oracle::real y) { return knot_boundary(r, y); }, breaks));
}

}  // namespace

TEST_CASE("region_constructor_validation") {
  CHECK_THROWS_AS(HypographRegion({}, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HypographRegion({{0, 0}, {0, 1}}, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HypographRegion({{1, 0}, {0, 1}}, 0.0, 0.0), std::invalid_argument);
  // Convex kink: slopes -1 then +1.
  CHECK_THROWS_AS(HypographRegion({{-1, 1}, {0, 0}, {1, 1}}, std::nullopt, std::nullopt), std::invalid_argument);
  // End slope steeper than the adjacent segment on the wrong side.
  CHECK_THROWS_AS(HypographRegion({{0, 0}, {1, 1}}, 0.5, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(HypographRegion({{0, std::nan("")}}, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HypographRegion({{0, 0}}, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(HypographRegion({{-1, 0}, {0, 1}, {1, 0}}, 2.0, -3.0));
}

TEST_CASE("region_boundary_and_cone_detection") {
  const auto c = HypographRegion::cone(1.0, 0.5, 2.0, -3.0);
  CHECK(c.is_cone());
  CHECK(c.boundary(0.5) == doctest::Approx(1.0));
  CHECK(c.boundary(-0.5) == doctest::Approx(-1.0));
  CHECK(c.boundary(1.5) == doctest::Approx(-2.0));
  CHECK(c.contains(-1.0, 0.5));
  CHECK_FALSE(c.contains(1.1, 0.5));
  const HypographRegion bounded({{-1, 0}, {1, 0}}, std::nullopt, std::nullopt);
  CHECK(bounded.boundary(2.0) == -kInf);
  CHECK_FALSE(bounded.is_cone());
}

TEST_CASE("slice_length_examples") {
  const auto g = GaussScalarTable::from_probability(0.25);
  const auto line = SliceLine::for_probability(0.25);
  CHECK(line.abscissa == doctest::Approx(-g.w));
  CHECK(SliceLine::for_probability(0.5).abscissa == 0.0);
  CHECK(slice_length(HypographRegion::half_plane(-g.w - 1.0), line) == 0.0);
  CHECK(slice_length(HypographRegion::half_plane(0.0), line) == kInf);
  const HypographRegion slab({{-1, 0}, {1, 0}}, std::nullopt, std::nullopt);
  CHECK(slice_length(slab, -0.5) == doctest::Approx(2.0).epsilon(1e-15));
  const auto cone = HypographRegion::symmetric_cone(0.25, 0.5);
  CHECK(std::abs(slice_length(cone, line) - 2 * g.h) < 1e-9);
  CHECK(2 * g.h == doctest::Approx(0.63728).epsilon(1e-5));
  // One-sided unbounded region.
  CHECK(slice_length(HypographRegion({{0, 0}}, -1.0, std::nullopt), -1.0) == kInf);
  CHECK(slice_length(HypographRegion({{0, 0}}, 1.0, std::nullopt), -1.0) == doctest::Approx(1.0));
}

TEST_CASE("gaussian_measure_of_hypographs_examples") {
  const auto g = GaussScalarTable::from_probability(0.25);
  CHECK(std::abs(gamma2_region(HypographRegion::half_plane(0.0)) - 0.5) < 1e-12);
  CHECK(std::abs(gamma2_region(HypographRegion::half_plane(-g.w)) - 0.25) < 1e-9);
  // Horizontal strip |y| <= h capped at the clip abscissa.
  const HypographRegion strip({{-g.h, 9.0}, {g.h, 9.0}}, std::nullopt, std::nullopt);
  CHECK(std::abs(gamma2_region(strip) - 0.25) < 1e-6);
}

TEST_CASE("gaussian_measure_matches_simpson_oracle_on_random_hypographs") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 60; ++i) {
    const auto r = random_hypograph(rng);
    INFO("region " << i);
    CHECK(std::abs(gamma2_region(r) - oracle_measure(r)) < 1e-9);
  }
  for (double theta : {0.1, 0.5, 1.2}) {
    const auto cone = HypographRegion::symmetric_cone(0.3, theta);
    CHECK(std::abs(gamma2_region(cone) - 2.0 * static_cast<double>(oracle::cone_half_measure(0.3, theta))) < 1e-9);
  }
}

TEST_CASE("gaussian_measure_monotone_under_inclusion_property") {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> shift(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto r = random_hypograph(rng);
    std::vector<Knot> moved = r.knots();
    const double d = shift(rng);
    for (auto& k : moved) k.t += d;
    const HypographRegion larger(moved, r.left_slope(), r.right_slope());
    CHECK(gamma2_region(larger) >= gamma2_region(r) - 1e-12);
  }
}

TEST_CASE("random_hypographs_are_valid_and_seeded") {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 200; ++i) {
    const auto ra = random_hypograph(a);
    const auto rb = random_hypograph(b);
    CHECK(ra.knots().size() >= 3);
    CHECK(ra.knots().size() <= 8);
    REQUIRE(ra.knots().size() == rb.knots().size());
    for (std::size_t k = 0; k < ra.knots().size(); ++k) CHECK(ra.knots()[k].t == rb.knots()[k].t);
  }
  std::mt19937_64 c(6);
  for (double p : {0.1, 0.3, 0.5}) {
    const auto r = random_hypograph_satisfying(p, c);
    CHECK(slice_length(r, SliceLine::for_probability(p)) < 2.0 * inv_psi(p));
  }
}

TEST_CASE("planar_implication_examples") {
  for (double theta : {0.01, 0.3, 0.8, 1.5}) {
    const auto imp = verify_prop_planar(0.25, HypographRegion::symmetric_cone(0.25, theta));
    INFO("theta = " << theta);
    CHECK(imp.checked);
    CHECK(imp.measure < 0.25);
    CHECK(imp.holds);
  }
  const auto g = GaussScalarTable::from_probability(0.25);
  const auto vac = verify_prop_planar(0.25, HypographRegion::half_plane(-g.w));
  CHECK(vac.slice_length == kInf);
  CHECK_FALSE(vac.checked);
  CHECK(vac.holds);
  CHECK_THROWS_AS(verify_prop_planar(0.6, HypographRegion::half_plane(0.0)), std::domain_error);
}

TEST_CASE("planar_implication_suite") {
  const auto par = run_prop_planar_suite({0.1, 0.25, 0.4, 0.5}, 1000, 42, Exec::parallel);
  CHECK(par.regions == 1000);
  CHECK(par.violations == 0);
  CHECK(par.worst_margin < 0.0);
  const auto ser = run_prop_planar_suite({0.1, 0.25, 0.4, 0.5}, 1000, 42, Exec::serial);
  CHECK(ser.worst_margin == par.worst_margin);
  CHECK(run_prop_planar_suite({0.25}, 50, 43).worst_margin != run_prop_planar_suite({0.25}, 50, 44).worst_margin);
  CHECK_THROWS_AS(run_prop_planar_suite({}, 10, 1), std::invalid_argument);
}

TEST_CASE("steiner_symmetrization_examples") {
  const auto g = GaussScalarTable::from_probability(0.25);
  const auto sym = HypographRegion::cone(0.4, 0.0, 1.5, -1.5);
  const auto fixed = steiner_symmetrize(sym);
  CHECK(fixed.knots().front().t == sym.knots().front().t);
  CHECK(*fixed.left_slope() == *sym.left_slope());
  CHECK(*fixed.right_slope() == *sym.right_slope());
  // Apex on y = h with rays through (-w, 0) and (-w, 2h).
  const double ax = 0.2;
  const double k = (ax + g.w) / g.h;
  const auto shifted = HypographRegion::cone(ax, g.h, k, -k);
  const auto out = steiner_symmetrize(shifted);
  CHECK(out.boundary(g.h) == doctest::Approx(-g.w).epsilon(1e-12));
  CHECK(out.boundary(-g.h) == doctest::Approx(-g.w).epsilon(1e-12));
  CHECK(std::abs(slice_length(out, -g.w) - slice_length(shifted, -g.w)) < 1e-12);
  CHECK_THROWS_AS(steiner_symmetrize(HypographRegion::half_plane(0.0)), std::invalid_argument);
}

TEST_CASE("steiner_symmetrization_properties") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 100; ++i) {
    const auto cone = random_cone(rng);
    const auto sym = steiner_symmetrize(cone);
    INFO("cone " << i);
    CHECK(oracle_measure(sym) >= oracle_measure(cone) - 1e-8);
    for (int j = 1; j <= 20; ++j) {
      const double x = cone.knots().front().t - 0.3 * j;
      CHECK(std::abs(slice_length(sym, x) - slice_length(cone, x)) < 1e-9);
    }
  }
  const auto par = run_steiner_suite(100, 42, Exec::parallel);
  const auto ser = run_steiner_suite(100, 42, Exec::serial);
  CHECK(par.cones == 100);
  CHECK(par.worst_measure_gain >= -1e-8);
  CHECK(par.worst_slice_error <= 1e-9);
  CHECK(par.worst_measure_gain == ser.worst_measure_gain);
}

TEST_CASE("section_measures") {
  const BoxBody box{{-1, -0.5, -2}, {1, 2, 3}};
  CHECK(dimension(box) == 3);
  const double inner = psi(1.0) * (cdf(2.0) - cdf(-0.5));
  CHECK(section_measure(box, 0.0) == doctest::Approx(inner).epsilon(1e-14));
  CHECK(section_measure(box, 3.5) == 0.0);
  const CylinderBody cyl{3, 1.5, -1, 1};
  CHECK(section_measure(cyl, 0.3) == doctest::Approx(static_cast<double>(oracle::ball_measure(2, 1.5))).epsilon(1e-13));
  CHECK(section_measure(cyl, 1.2) == 0.0);
  const ConeBody cone{3, 10, 2};
  CHECK(section_measure(cone, 1.0) == doctest::Approx(static_cast<double>(oracle::ball_measure(2, 2.0))).epsilon(1e-13));
  CHECK(section_measure(cone, 11.0) == 0.0);
  CHECK(section_measure(HalfSpaceBody{3, 0.5}, 0.0) == 1.0);
  CHECK(section_measure(HalfSpaceBody{3, 0.5}, 1.0) == 0.0);
  CHECK_THROWS_AS(section_measure(BoxBody{{0}, {0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(section_measure(ConeBody{1, 1, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("ehrhard_symmetrization_preserves_measure") {
  const auto half = ehrhard_symmetrize(HalfSpaceBody{3, 0.7});
  CHECK(std::abs(gamma2_region(half.region) - cdf(0.7)) < 1e-9);
  const auto box = ehrhard_symmetrize(BoxBody{{-1, -1, -1}, {1, 1, 1}});
  CHECK(std::abs(gamma2_region(box.region) - std::pow(psi(1.0), 3)) < 1e-6);
  CHECK(box.worst_concavity >= -1e-9);
  const auto cone = ehrhard_symmetrize(ConeBody{3, 10, 2});
  const double direct = cone_measure(3, 10, 2);
  CHECK(std::abs(gamma2_region(cone.region) - direct) < 1e-4);
  CHECK(cone.worst_concavity >= -1e-9);
  // Independent check of the direct value by Monte Carlo (4 sigma).
  const auto mc = oracle::gaussian_probability(3, 400000, 9, [](const std::vector<double>& x) {
    return x[2] >= 0.0 && x[2] <= 10.0 && std::hypot(x[0], x[1]) <= 2.0 * x[2];
  });
  CHECK(std::abs(direct - mc.mean) <= 4.0 * mc.standard_error);
  const auto cyl = ehrhard_symmetrize(CylinderBody{3, 1.0, -0.5, 2.0});
  CHECK(std::abs(gamma2_region(cyl.region) - ball_measure(2, 1.0) * (cdf(2.0) - cdf(-0.5))) < 1e-4);
  CHECK_THROWS_AS(ehrhard_symmetrize(ConeBody{3, 1, 1}, 8), std::invalid_argument);
}
