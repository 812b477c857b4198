#include "gaussbalance/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "gaussbalance/cones.hpp"
#include "gaussbalance/gaussian.hpp"
#include "gaussbalance/quadrature.hpp"

namespace gaussbalance {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlopeSlack = 1e-12;

double segment_slope(const Knot& a, const Knot& b) { return (b.t - a.t) / (b.y - a.y); }

// t(y) = t_ref + slope (y - y_ref) on [ya, yb]; returns the sub-interval where t >= level.
std::pair<double, double> superlevel(double ya, double yb, double y_ref, double t_ref, double slope,
                                     double level) {
  if (slope == 0.0) return t_ref >= level ? std::pair{ya, yb} : std::pair{kInf, -kInf};
  const double cross = y_ref + (level - t_ref) / slope;
  if (slope > 0.0) return {std::max(ya, cross), yb};
  return {ya, std::min(yb, cross)};
}

// Phi^{-1} of a section measure m with complement tail = 1 - m, clipped to
// the quadrature window. The upper half goes through the tail so that
// measures close to 1 keep their accuracy.
double clipped_quantile(double m, double tail, double clip) {
  if (m <= 0.0) return -kInf;
  if (tail <= ccdf(clip)) return clip;
  const double t = m <= 0.5 ? inv_cdf(m) : -inv_cdf(tail);
  return std::clamp(t, -clip, clip);
}

}  // namespace

HypographRegion::HypographRegion(std::vector<Knot> knots, std::optional<double> left_slope,
                                 std::optional<double> right_slope, double clip)
    : knots_(std::move(knots)), left_slope_(left_slope), right_slope_(right_slope), clip_(clip) {
  if (knots_.empty()) throw std::invalid_argument("HypographRegion: need at least one knot");
  if (!(clip_ > 0.0)) throw std::invalid_argument("HypographRegion: clip must be positive");
  for (const auto& k : knots_)
    if (!std::isfinite(k.y) || !std::isfinite(k.t)) throw std::invalid_argument("HypographRegion: knots must be finite");
  if ((left_slope_ && !std::isfinite(*left_slope_)) || (right_slope_ && !std::isfinite(*right_slope_)))
    throw std::invalid_argument("HypographRegion: end slopes must be finite");

  double prev = left_slope_.value_or(kInf);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].y > knots_[i - 1].y))
      throw std::invalid_argument("HypographRegion: knots must be strictly increasing in y");
    const double s = segment_slope(knots_[i - 1], knots_[i]);
    if (s > prev + kSlopeSlack * std::max(1.0, std::abs(prev)))
      throw std::invalid_argument("HypographRegion: boundary is not concave");
    prev = s;
  }
  if (right_slope_ && std::isfinite(prev) &&
      *right_slope_ > prev + kSlopeSlack * std::max(1.0, std::abs(prev)))
    throw std::invalid_argument("HypographRegion: boundary is not concave");
}

HypographRegion HypographRegion::half_plane(double c) { return HypographRegion({{0.0, c}}, 0.0, 0.0); }

HypographRegion HypographRegion::cone(double apex_x, double apex_y, double left_slope, double right_slope) {
  return HypographRegion({{apex_y, apex_x}}, left_slope, right_slope);
}

HypographRegion HypographRegion::symmetric_cone(double p, double theta) {
  const ConeState st = cone_state(p, theta);
  const double k = 1.0 / std::tan(theta);
  return cone(st.y, 0.0, k, -k);
}

double HypographRegion::boundary(double y) const {
  const auto& first = knots_.front();
  const auto& last = knots_.back();
  if (y < first.y) return left_slope_ ? first.t + *left_slope_ * (y - first.y) : -kInf;
  if (y > last.y) return right_slope_ ? last.t + *right_slope_ * (y - last.y) : -kInf;
  if (knots_.size() == 1) return first.t;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                                   [](double v, const Knot& k) { return v < k.y; });
  if (it == knots_.end()) return last.t;
  const Knot& b = *it;
  const Knot& a = *(it - 1);
  return a.t + (b.t - a.t) * (y - a.y) / (b.y - a.y);
}

bool HypographRegion::is_cone() const {
  return knots_.size() == 1 && left_slope_ && right_slope_ && *left_slope_ > 0.0 && *right_slope_ < 0.0;
}

double slice_length(const HypographRegion& region, double abscissa) {
  const auto& ks = region.knots();
  double lo = kInf, hi = -kInf;
  auto merge = [&](std::pair<double, double> iv) {
    if (iv.first <= iv.second) {
      lo = std::min(lo, iv.first);
      hi = std::max(hi, iv.second);
    }
  };
  if (region.left_slope())
    merge(superlevel(-kInf, ks.front().y, ks.front().y, ks.front().t, *region.left_slope(), abscissa));
  if (ks.size() == 1 && ks.front().t >= abscissa) merge({ks.front().y, ks.front().y});
  for (std::size_t i = 1; i < ks.size(); ++i)
    merge(superlevel(ks[i - 1].y, ks[i].y, ks[i - 1].y, ks[i - 1].t, segment_slope(ks[i - 1], ks[i]), abscissa));
  if (region.right_slope())
    merge(superlevel(ks.back().y, kInf, ks.back().y, ks.back().t, *region.right_slope(), abscissa));
  if (lo > hi) return 0.0;
  return hi - lo;
}

SliceLine SliceLine::for_probability(double p) { return {p == 0.5 ? 0.0 : inv_cdf(p)}; }

double slice_length(const HypographRegion& region, SliceLine line) { return slice_length(region, line.abscissa); }

double gamma2_region(const HypographRegion& region, double abs_tol) {
  const double clip = region.clip();
  std::vector<double> breaks{-clip};
  for (const auto& k : region.knots())
    if (k.y > -clip && k.y < clip) breaks.push_back(k.y);
  breaks.push_back(clip);
  auto integrand = [&region, clip](double y) { return pdf(y) * cdf(std::min(region.boundary(y), clip)); };
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  opt.max_subdivisions = 50000;
  return integrate_panels(integrand, breaks, opt).value;
}

PlanarImplication verify_prop_planar(double p, const HypographRegion& region) {
  if (!(p > 0.0 && p <= 0.5)) throw std::domain_error("verify_prop_planar: requires 0 < p <= 1/2");
  PlanarImplication r{};
  r.slice_length = slice_length(region, SliceLine::for_probability(p));
  r.threshold = 2.0 * inv_psi(p);
  r.measure = gamma2_region(region);
  // Closed hypothesis: cones through (-w, +-h) sit exactly on the threshold
  // and are covered by the cone-family sweep (m(theta) < p/2).
  r.checked = r.slice_length <= r.threshold * (1.0 + 1e-12);
  r.holds = !r.checked || r.measure < p;
  return r;
}

HypographRegion steiner_symmetrize(const HypographRegion& cone) {
  if (!cone.is_cone())
    throw std::invalid_argument("steiner_symmetrize: input must be a single-apex cone opening to the left");
  const double a = *cone.left_slope();
  const double b = -*cone.right_slope();
  const double k = 2.0 * a * b / (a + b);
  return HypographRegion::cone(cone.knots().front().t, 0.0, k, -k);
}

HypographRegion random_hypograph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(3, 8);
  std::uniform_real_distribution<double> position(-3.5, 3.5);
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  std::uniform_real_distribution<double> offset(-3.0, 3.0);
  std::uniform_real_distribution<double> extra(0.0, 4.0);
  std::bernoulli_distribution has_end(0.8);

  const int k = count(rng);
  std::vector<double> ys;
  do {
    ys.clear();
    for (int i = 0; i < k; ++i) ys.push_back(position(rng));
    std::sort(ys.begin(), ys.end());
  } while (std::adjacent_find(ys.begin(), ys.end(), [](double a, double b) { return b - a < 0.05; }) != ys.end());

  std::vector<double> slopes;
  for (int i = 0; i + 1 < k; ++i) slopes.push_back(slope(rng));
  std::sort(slopes.begin(), slopes.end(), std::greater<>());

  std::vector<Knot> knots{{ys[0], offset(rng)}};
  for (int i = 1; i < k; ++i) knots.push_back({ys[i], knots.back().t + slopes[i - 1] * (ys[i] - ys[i - 1])});

  std::optional<double> left, right;
  if (has_end(rng)) left = slopes.front() + extra(rng);
  if (has_end(rng)) right = slopes.back() - extra(rng);
  return HypographRegion(std::move(knots), left, right);
}

HypographRegion random_hypograph_satisfying(double p, std::mt19937_64& rng) {
  const SliceLine line = SliceLine::for_probability(p);
  const double threshold = 2.0 * inv_psi(p);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    auto region = random_hypograph(rng);
    if (slice_length(region, line) < threshold) return region;
  }
  throw std::runtime_error("random_hypograph_satisfying: rejection sampling exhausted");
}

HypographRegion random_cone(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> apex_x(-3.0, 3.0);
  std::uniform_real_distribution<double> apex_y(-2.0, 2.0);
  std::uniform_real_distribution<double> log_slope(std::log(0.1), std::log(10.0));
  const double x = apex_x(rng);
  const double y = apex_y(rng);
  const double a = std::exp(log_slope(rng));
  const double b = std::exp(log_slope(rng));
  return HypographRegion::cone(x, y, a, -b);
}

PlanarSuiteReport run_prop_planar_suite(const std::vector<double>& ps, int count, std::uint64_t seed, Exec exec) {
  if (ps.empty()) throw std::invalid_argument("run_prop_planar_suite: empty p list");
  const auto margins = parallel_map(
      static_cast<std::size_t>(count),
      [&](std::size_t i) {
        const double p = ps[i % ps.size()];
        auto rng = item_rng(seed, i);
        const auto region = random_hypograph_satisfying(p, rng);
        return verify_prop_planar(p, region).measure - p;
      },
      exec);
  PlanarSuiteReport r;
  r.regions = count;
  r.worst_margin = -kInf;
  for (double m : margins) {
    if (m >= 0.0) ++r.violations;
    r.worst_margin = std::max(r.worst_margin, m);
  }
  return r;
}

SteinerSuiteReport run_steiner_suite(int count, std::uint64_t seed, Exec exec) {
  struct Item {
    double gain;
    double slice_error;
  };
  const auto items = parallel_map(
      static_cast<std::size_t>(count),
      [&](std::size_t i) {
        auto rng = item_rng(seed, i);
        const auto cone = random_cone(rng);
        const auto sym = steiner_symmetrize(cone);
        const double apex = cone.knots().front().t;
        double err = 0.0;
        for (int j = 1; j <= 100; ++j) {
          const double x = apex - 0.08 * j;
          err = std::max(err, std::abs(slice_length(sym, x) - slice_length(cone, x)));
        }
        return Item{gamma2_region(sym) - gamma2_region(cone), err};
      },
      exec);
  SteinerSuiteReport r;
  r.cones = count;
  r.worst_measure_gain = kInf;
  for (const auto& it : items) {
    r.worst_measure_gain = std::min(r.worst_measure_gain, it.gain);
    r.worst_slice_error = std::max(r.worst_slice_error, it.slice_error);
  }
  return r;
}

namespace {

void validate(const SectionedBody& body) {
  std::visit(
      [](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ConeBody>) {
          if (b.n < 2 || !(b.d > 0.0) || !(b.t > 0.0)) throw std::invalid_argument("ConeBody: need n >= 2, d > 0, t > 0");
        } else if constexpr (std::is_same_v<B, BoxBody>) {
          if (b.lo.empty() || b.lo.size() != b.hi.size()) throw std::invalid_argument("BoxBody: bad bounds");
          for (std::size_t i = 0; i < b.lo.size(); ++i)
            if (!(b.lo[i] < b.hi[i]) || !std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]))
              throw std::invalid_argument("BoxBody: need finite lo < hi");
        } else if constexpr (std::is_same_v<B, CylinderBody>) {
          if (b.n < 2 || !(b.radius > 0.0) || !(b.z_lo < b.z_hi)) throw std::invalid_argument("CylinderBody: bad parameters");
        } else {
          if (b.n < 1 || !std::isfinite(b.a)) throw std::invalid_argument("HalfSpaceBody: bad parameters");
        }
      },
      body);
}

}  // namespace

int dimension(const SectionedBody& body) {
  return std::visit(
      [](const auto& b) -> int {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, BoxBody>)
          return static_cast<int>(b.lo.size());
        else
          return b.n;
      },
      body);
}

double section_measure(const SectionedBody& body, double z) {
  validate(body);
  return std::visit(
      [z](const auto& b) -> double {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ConeBody>) {
          if (!(z > 0.0) || z > b.d) return 0.0;
          return ball_measure(b.n - 1, b.t * z);
        } else if constexpr (std::is_same_v<B, BoxBody>) {
          if (z < b.lo.back() || z > b.hi.back()) return 0.0;
          double m = 1.0;
          for (std::size_t i = 0; i + 1 < b.lo.size(); ++i)
            m *= b.lo[i] >= 0.0 ? ccdf(b.lo[i]) - ccdf(b.hi[i]) : cdf(b.hi[i]) - cdf(b.lo[i]);
          return m;
        } else if constexpr (std::is_same_v<B, CylinderBody>) {
          if (z < b.z_lo || z > b.z_hi) return 0.0;
          return ball_measure(b.n - 1, b.radius);
        } else {
          return z <= b.a ? 1.0 : 0.0;
        }
      },
      body);
}

namespace {

// 1 - section_measure, without cancellation for the radial bodies.
double section_tail(const SectionedBody& body, double z) {
  if (const auto* c = std::get_if<ConeBody>(&body)) {
    if (!(z > 0.0) || z > c->d) return 1.0;
    return ball_measure_complement(c->n - 1, c->t * z);
  }
  if (const auto* c = std::get_if<CylinderBody>(&body)) {
    if (z < c->z_lo || z > c->z_hi) return 1.0;
    return ball_measure_complement(c->n - 1, c->radius);
  }
  return 1.0 - section_measure(body, z);
}

std::pair<double, double> support(const SectionedBody& body) {
  return std::visit(
      [](const auto& b) -> std::pair<double, double> {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, ConeBody>)
          return {0.0, b.d};
        else if constexpr (std::is_same_v<B, BoxBody>)
          return {b.lo.back(), b.hi.back()};
        else if constexpr (std::is_same_v<B, CylinderBody>)
          return {b.z_lo, b.z_hi};
        else
          return {-kInf, b.a};
      },
      body);
}

}  // namespace

EhrhardResult ehrhard_symmetrize(const SectionedBody& body, int knots) {
  validate(body);
  const double clip = HypographRegion::kDefaultClip;
  auto profile = [&](double z) { return clipped_quantile(section_measure(body, z), section_tail(body, z), clip); };
  const auto [z_lo, z_hi] = support(body);

  std::optional<HypographRegion> region;
  if (std::holds_alternative<HalfSpaceBody>(body)) {
    region.emplace(std::vector<Knot>{{z_hi, clip}}, 0.0, std::nullopt, clip);
  } else if (std::holds_alternative<ConeBody>(body)) {
    // Geometric spacing near the apex, where t_z drops to -inf, then uniform.
    if (knots < 16) throw std::invalid_argument("ehrhard_symmetrize: need at least 16 knots");
    const int near = knots / 4;
    const int far = knots - near;
    std::vector<Knot> ks;
    const double z_first = 1e-4 * z_hi;
    const double z_mid = 0.05 * z_hi;
    for (int i = 0; i < near; ++i) {
      const double z = z_first * std::pow(z_mid / z_first, static_cast<double>(i) / near);
      ks.push_back({z, profile(z)});
    }
    for (int i = 0; i < far; ++i) {
      const double z = z_mid + (z_hi - z_mid) * i / (far - 1);
      ks.push_back({z, profile(z)});
    }
    std::erase_if(ks, [](const Knot& k) { return !std::isfinite(k.t); });
    region.emplace(std::move(ks), std::nullopt, std::nullopt, clip);
  } else {
    const double t = profile(0.5 * (z_lo + z_hi));
    region.emplace(std::vector<Knot>{{z_lo, t}, {z_hi, t}}, std::nullopt, std::nullopt, clip);
  }

  // Midpoint concavity of the exact profile on a uniform interior grid.
  const double a = std::isfinite(z_lo) ? z_lo : z_hi - 2.0 * clip;
  const double b = z_hi;
  constexpr int kChecks = 200;
  double worst = kInf;
  std::vector<double> ts(kChecks + 1);
  for (int i = 0; i <= kChecks; ++i) ts[i] = profile(a + (b - a) * i / kChecks);
  for (int i = 1; i < kChecks; ++i) {
    if (!std::isfinite(ts[i - 1]) || !std::isfinite(ts[i]) || !std::isfinite(ts[i + 1])) continue;
    worst = std::min(worst, ts[i] - 0.5 * (ts[i - 1] + ts[i + 1]));
  }
  return {std::move(*region), std::isfinite(worst) ? worst : 0.0};
}

}  // namespace gaussbalance
