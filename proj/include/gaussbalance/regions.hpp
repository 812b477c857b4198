#pragma once

// Planar hypographs W = {(x, y) : x <= t_y} with a concave piecewise-linear
// boundary t, and the operations the planar isoperimetric argument needs.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "gaussbalance/parallel.hpp"

namespace gaussbalance {

struct Knot {
  double y;
  double t;
};

class HypographRegion {
 public:
  static constexpr double kDefaultClip = 9.0;

  /// Knots strictly increasing in y with non-increasing segment slopes. An
  /// absent end slope means t = -inf beyond that end of the knot range.
  HypographRegion(std::vector<Knot> knots, std::optional<double> left_slope,
                  std::optional<double> right_slope, double clip = kDefaultClip);

  /// {x <= c}.
  static HypographRegion half_plane(double c);
  /// Cone with apex (apex_x, apex_y): t = apex_x + left_slope (y - apex_y)
  /// below the apex and apex_x + right_slope (y - apex_y) above it.
  static HypographRegion cone(double apex_x, double apex_y, double left_slope, double right_slope);
  /// C_theta for probability p.
  static HypographRegion symmetric_cone(double p, double theta);

  const std::vector<Knot>& knots() const { return knots_; }
  const std::optional<double>& left_slope() const { return left_slope_; }
  const std::optional<double>& right_slope() const { return right_slope_; }
  double clip() const { return clip_; }

  /// t_y, or -inf outside the support.
  double boundary(double y) const;
  bool contains(double x, double y) const { return x <= boundary(y); }
  bool is_cone() const;

 private:
  std::vector<Knot> knots_;
  std::optional<double> left_slope_;
  std::optional<double> right_slope_;
  double clip_;
};

/// Length of {y : t_y >= abscissa}; +inf when unbounded, 0 when empty.
double slice_length(const HypographRegion& region, double abscissa);

/// The vertical line x = Phi^{-1}(p).
struct SliceLine {
  double abscissa;
  static SliceLine for_probability(double p);
};

double slice_length(const HypographRegion& region, SliceLine line);

/// gamma_2(W) by knot-aligned adaptive quadrature on [-clip, clip].
double gamma2_region(const HypographRegion& region, double abs_tol = 1e-11);

struct PlanarImplication {
  double slice_length;
  double threshold;  // 2 Psi^{-1}(p)
  double measure;
  bool checked;      // slice length <= threshold (relative slack 1e-12)
  bool holds;        // vacuous, or measure < p
};

PlanarImplication verify_prop_planar(double p, const HypographRegion& region);

/// Steiner symmetrization of a left-opening cone about the x-axis: same apex
/// abscissa, slopes +-k with 2/k = 1/a + 1/b. Throws std::invalid_argument
/// for non-cones.
HypographRegion steiner_symmetrize(const HypographRegion& cone);

/// 3-8 knots with decreasing slopes; end slopes absent with probability 1/5.
HypographRegion random_hypograph(std::mt19937_64& rng);
/// Rejection-samples random_hypograph until the slice hypothesis holds for p.
HypographRegion random_hypograph_satisfying(double p, std::mt19937_64& rng);
/// Cone with random apex and slopes a > 0 > -b.
HypographRegion random_cone(std::mt19937_64& rng);

struct PlanarSuiteReport {
  int regions = 0;
  int violations = 0;
  double worst_margin = 0.0;  // max over regions of gamma_2(W) - p
};

/// `count` seeded random hypographs, p cycling through `ps`.
PlanarSuiteReport run_prop_planar_suite(const std::vector<double>& ps, int count, std::uint64_t seed,
                                        Exec exec = Exec::parallel);

struct SteinerSuiteReport {
  int cones = 0;
  double worst_measure_gain = 0.0;  // min over cones of gamma_2(sym) - gamma_2(cone)
  double worst_slice_error = 0.0;   // max |slice(sym) - slice(cone)| over sampled abscissas
};

SteinerSuiteReport run_steiner_suite(int count, std::uint64_t seed, Exec exec = Exec::parallel);

// Bodies whose sections orthogonal to the last axis have computable measure.
struct ConeBody {      // Conv(0, d(e_n + t B)), axis e_n
  int n;
  double d;
  double t;
};
struct BoxBody {       // product of [lo_i, hi_i]; last factor is the axis
  std::vector<double> lo;
  std::vector<double> hi;
};
struct CylinderBody {  // radius-r ball in the first n-1 coordinates times [z_lo, z_hi]
  int n;
  double radius;
  double z_lo;
  double z_hi;
};
struct HalfSpaceBody { // x_n <= a
  int n;
  double a;
};
using SectionedBody = std::variant<ConeBody, BoxBody, CylinderBody, HalfSpaceBody>;

int dimension(const SectionedBody& body);
/// gamma_{n-1}(K_z). Throws std::invalid_argument for malformed bodies.
double section_measure(const SectionedBody& body, double z);

struct EhrhardResult {
  HypographRegion region;
  double worst_concavity = 0.0;  // min over sampled z of t(z) - (t(z-dz) + t(z+dz))/2
};

/// W with t_z = Phi^{-1}(gamma_{n-1}(K_z)), clipped at +-clip, as a
/// piecewise-linear hypograph on `knots` samples of the support.
EhrhardResult ehrhard_symmetrize(const SectionedBody& body, int knots = 4000);

}  // namespace gaussbalance
