#include "gaussbalance/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gaussbalance/balancing.hpp"
#include "gaussbalance/bounds.hpp"
#include "gaussbalance/cones.hpp"
#include "gaussbalance/counterexample.hpp"
#include "gaussbalance/gaussian.hpp"
#include "gaussbalance/lattice.hpp"
#include "gaussbalance/regions.hpp"

namespace gaussbalance {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::verify_cone, "verify-cone"},       {Command::verify_planar, "verify-planar"},
    {Command::verify_claims, "verify-claims"},   {Command::verify_lattice, "verify-lattice"},
    {Command::verify_balancing, "verify-balancing"}, {Command::counterexample, "counterexample"},
    {Command::bounds_table, "bounds-table"},     {Command::all, "all"},
};

std::string tag(const std::string& base, const std::string& key, double v) {
  return base + "[" + key + "=" + format_number(v) + "]";
}

std::vector<double> select(const std::vector<double>& ps, bool lower_half, const std::vector<double>& fallback) {
  if (ps.empty()) return fallback;
  std::vector<double> out;
  for (double p : ps)
    if (lower_half ? p <= 0.5 : p > 0.5) out.push_back(p);
  return out;
}

Vec unit(int n, int i) {
  Vec v = Vec::Zero(n);
  v[i] = 1.0;
  return v;
}

// ---------------------------------------------------------------- cones ---

void suite_cone(const RunConfig& cfg, Report& rep) {
  const std::string S = "cone";
  std::vector<double> ps = cfg.p_list.empty() ? std::vector<double>{0.1, 0.25, 0.4, 0.499, 0.6, 0.75, 0.9} : cfg.p_list;
  Table sweep{"cone_sweep", {"p", "points", "max_excess", "argmax_theta", "max_double_m", "q", "holds"}, {}};
  for (double p : ps) {
    const SweepReport r = sweep_verify(p, cfg.grid);
    sweep.rows.push_back({p, static_cast<long long>(r.points), r.max_excess, r.argmax_theta, r.max_double_m, r.q,
                          std::string(r.holds ? "true" : "false")});
    if (p <= 0.5) {
      rep.add_check(S, tag("half_cone_measure_below_p_over_2", "p", p), true, r.max_excess < 0.0, r.max_excess,
                    "max over the grid of m(theta) - p/2");
    } else {
      rep.add_check(S, tag("cone_measure_exceeds_p", "p", p), true, r.max_double_m > p, r.max_double_m - p,
                    "m'(0) > 0 for p > 1/2, so some C_theta has measure above p");
      rep.add_check(S, tag("cone_measure_below_q", "p", p), false, r.max_double_m <= r.q, r.max_double_m - r.q,
                    "conjectured bound max gamma_2(C_theta) <= Phi(sqrt(2) Phi^-1(p))");
    }
    const double left = m_theta(p, 2e-3) - 0.5 * p;
    const double right = m_theta(p, 0.5 * std::numbers::pi - 2e-3) - 0.5 * p;
    const double worst = std::max(std::abs(left), std::abs(right));
    rep.add_check(S, tag("endpoint_limits", "p", p), true, worst <= cfg.tol.endpoint, worst,
                  "|m(theta) - p/2| at theta = 2e-3 and pi/2 - 2e-3");
  }
  rep.add_table(std::move(sweep));

  const auto derivs = derivative_suite({0.25, 0.5, 0.75}, 50, cfg.seed);
  Table dt{"derivative_checks", {"p", "theta", "closed_form", "finite_difference", "rel_error", "truncation_bound"}, {}};
  double worst_rel = 0.0;
  bool all_ok = true;
  for (const auto& d : derivs) {
    dt.rows.push_back({d.p, d.theta, d.closed_form, d.finite_difference, d.rel_error, d.truncation_bound});
    worst_rel = std::max(worst_rel, d.rel_error);
    all_ok = all_ok && d.consistent(cfg.tol.derivative);
  }
  rep.add_check(S, "derivative_formula", true, all_ok, worst_rel,
                "150 seeded angles; relative error, or within the stencil error where m' is near zero");
  rep.add_table(std::move(dt));

  // Midpoint convexity on [theta_0, pi/2).
  for (double p : {0.1, 0.25, 0.4}) {
    const double theta0 = *cone_state(p, 0.5).theta0;
    double worst_gap = -kInf;
    for (int i = 0; i < 100; ++i) {
      auto rng = item_rng(cfg.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(i));
      std::uniform_real_distribution<double> angle(theta0, 0.5 * std::numbers::pi - 1e-3);
      double a = angle(rng), b = angle(rng);
      if (a > b) std::swap(a, b);
      const double gap = m_theta(p, 0.5 * (a + b)) - 0.5 * (m_theta(p, a) + m_theta(p, b));
      worst_gap = std::max(worst_gap, gap);
    }
    rep.add_check(S, tag("convex_beyond_theta0", "p", p), true, worst_gap <= cfg.tol.convexity, worst_gap,
                  "max of m(mid) - mean of endpoint values over 100 seeded pairs");
  }
}

// --------------------------------------------------------------- claims ---

void suite_claims(const RunConfig& cfg, Report& rep) {
  const std::string S = "claims";
  const auto ps = select(cfg.p_list, true, {0.1, 0.25, 0.4, 0.499});
  Table crit{"critical_points", {"p", "theta_star", "m_at_star", "sign_changes", "y_prime_sq", "margin"}, {}};
  for (double p : ps) {
    const auto c = find_critical_theta(p, 1000);
    rep.add_check(S, tag("unique_critical_point", "p", p), true, c.sign_changes == 1, c.sign_changes,
                  "sign changes of m' on a 1000-point grid");
    rep.add_check(S, tag("critical_value_below_p_over_2", "p", p), true, c.m_at_star < 0.5 * p, c.m_at_star - 0.5 * p);
    if (p < 0.5) {
      const auto c7 = check_claim7(p);
      const bool premise = c7.y > 0.0;
      rep.add_check(S, tag("critical_radius_exceeds_2_over_pi", "p", p), true, !premise || c7.margin > 0.0, c7.margin,
                    premise ? "(y')^2 - 2/pi at the critical angle"
                            : "vacuous: the critical angle lies beyond theta_0 (y < 0), where m is convex");
      crit.rows.push_back({p, c.theta_star, c.m_at_star, static_cast<long long>(c.sign_changes), c7.y_prime_sq, c7.margin});
    } else {
      crit.rows.push_back({p, c.theta_star, c.m_at_star, static_cast<long long>(c.sign_changes), kNaN, kNaN});
    }
  }
  rep.add_table(std::move(crit));

  std::vector<double> p_grid(1000);
  for (int i = 0; i < 1000; ++i) p_grid[static_cast<std::size_t>(i)] = 0.001 + 0.499 * (i + 1) / 1000.0;
  const auto c8 = check_claim8(p_grid);
  rep.add_check(S, "quadratic_inequality_both_forms", true, c8.empty(), static_cast<double>(c8.size()),
                "violations on 1000 p in (0.001, 0.5]");

  long long critical_violations = 0, raw_violations = 0, raw_inside = 0;
  double worst_critical = kInf;
  Table lem{"cubic_inequality", {"p", "critical_start", "critical_min_value", "unrestricted_violations"}, {}};
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    const double p = p_grid[i];
    const auto g = GaussScalarTable::from_probability(p);
    const double x0 = lem5_critical_region_start(p);
    std::vector<double> xs(1000), raw(1000);
    for (int j = 0; j < 1000; ++j) {
      xs[static_cast<std::size_t>(j)] = x0 + (g.w + 20.0 - x0) * (j + 1) / 1000.0;
      raw[static_cast<std::size_t>(j)] = g.w + 20.0 * (j + 1) / 1000.0;
    }
    critical_violations += static_cast<long long>(check_lem5_inequality(p, xs).size());
    double min_value = kInf;
    for (double x : xs) min_value = std::min(min_value, lem5_value(g.h, g.w, x));
    worst_critical = std::min(worst_critical, min_value);
    const auto rv = check_lem5_inequality(p, raw);
    raw_violations += static_cast<long long>(rv.size());
    for (const auto& v : rv)
      if (v.x > x0) ++raw_inside;
    if (i % 50 == 49 || !rv.empty()) lem.rows.push_back({p, x0, min_value, static_cast<long long>(rv.size())});
  }
  rep.add_check(S, "cubic_inequality_critical_region", true, critical_violations == 0, worst_critical,
                "1000 x 1000 grid with x > w and x^2 + h^2 > 2/pi; value is the smallest evaluated quantity");
  rep.add_check(S, "cubic_inequality_failures_outside_critical_region", true, raw_inside == 0,
                static_cast<double>(raw_violations),
                "unrestricted x in (w, w + 20]: value counts failures, all of which must have x^2 + h^2 <= 2/pi");
  rep.add_table(std::move(lem));
}

// --------------------------------------------------------------- planar ---

void suite_planar(const RunConfig& cfg, Report& rep) {
  const std::string S = "planar";
  const auto ps = select(cfg.p_list, true, {0.1, 0.25, 0.4, 0.5});
  if (!ps.empty()) {
    const auto pr = run_prop_planar_suite(ps, cfg.planar_regions, cfg.seed);
    rep.add_check(S, "slice_hypothesis_implies_small_measure", true, pr.violations == 0, pr.worst_margin,
                  std::to_string(pr.regions) + " seeded hypographs; value is max gamma_2(W) - p");
    for (double p : ps) {
      double worst = -kInf;
      bool ok = true;
      for (int i = 1; i <= 50; ++i) {
        const double theta = 1e-3 + (0.5 * std::numbers::pi - 2e-3) * i / 51.0;
        const auto imp = verify_prop_planar(p, HypographRegion::symmetric_cone(p, theta));
        ok = ok && imp.checked && imp.holds;
        worst = std::max(worst, imp.measure - p);
      }
      rep.add_check(S, tag("cone_family_measure_below_p", "p", p), true, ok, worst, "50 cones through (-w, +-h)");
    }
  }
  const auto st = run_steiner_suite(cfg.steiner_cones, cfg.seed);
  rep.add_check(S, "steiner_measure_non_decrease", true, st.worst_measure_gain >= -cfg.tol.steiner,
                st.worst_measure_gain, std::to_string(st.cones) + " seeded cones");
  rep.add_check(S, "steiner_slice_preservation", true, st.worst_slice_error <= cfg.tol.slice, st.worst_slice_error);

  Table et{"ehrhard", {"body", "direct_measure", "symmetrized_measure", "difference", "worst_concavity"}, {}};
  struct Spec {
    std::string name;
    SectionedBody body;
    double direct;
  };
  auto interval = [](double lo, double hi) { return cdf(hi) - cdf(lo); };
  std::vector<Spec> specs;
  for (auto [d, t] : {std::pair{10.0, 2.0}, {5.0, 1.0}, {3.0, 0.5}, {8.0, 1.5}, {2.0, 3.0}})
    specs.push_back({"cone(d=" + format_number(d) + ",t=" + format_number(t) + ")", ConeBody{3, d, t},
                     cone_measure(3, d, t)});
  const std::vector<std::pair<std::vector<double>, std::vector<double>>> boxes = {
      {{-1, -1, -1}, {1, 1, 1}},   {{-0.5, -2, -1}, {1, 0.3, 2}}, {{0, 0, 0}, {1, 1, 1}},
      {{-2, -0.5, -3}, {2, 0.5, 0}}, {{-1, -1, 0.5}, {3, 1, 2}}};
  for (const auto& [lo, hi] : boxes) {
    double m = 1.0;
    for (std::size_t i = 0; i < 3; ++i) m *= interval(lo[i], hi[i]);
    specs.push_back({"box", BoxBody{lo, hi}, m});
  }
  double worst_diff = 0.0, worst_conc = kInf;
  for (const auto& sp : specs) {
    const auto er = ehrhard_symmetrize(sp.body);
    const double sym = gamma2_region(er.region);
    worst_diff = std::max(worst_diff, std::abs(sym - sp.direct));
    worst_conc = std::min(worst_conc, er.worst_concavity);
    et.rows.push_back({sp.name, sp.direct, sym, sym - sp.direct, er.worst_concavity});
  }
  rep.add_check(S, "ehrhard_measure_preserved", true, worst_diff <= cfg.tol.ehrhard, worst_diff, "10 cone/box bodies in R^3");
  rep.add_check(S, "ehrhard_profile_concave", true, worst_conc >= -cfg.tol.concavity, worst_conc);
  rep.add_table(std::move(et));
}

// -------------------------------------------------------------- lattice ---

void suite_lattice(const RunConfig& cfg, Report& rep) {
  const std::string S = "lattice";
  CoveringOptions opt;
  opt.grid = cfg.lattice_grid;
  CoveringOptions opt3 = opt;
  opt3.grid = std::max(8, cfg.lattice_grid / 3);
  const auto Z2 = LatticeBasis::identity(2);
  const auto Z3 = LatticeBasis::identity(3);
  Table lt{"lattice_values", {"quantity", "computed", "expected", "tolerance", "resolution"}, {}};
  auto check_value = [&](const std::string& name, double computed, double expected, double tol, double res) {
    lt.rows.push_back({name, computed, expected, tol, res});
    rep.add_check(S, name, true, std::abs(computed - expected) <= tol, computed - expected);
  };

  for (double p : {1.0, 2.0, kInfinityNorm}) {
    const auto r = covering_radius(Z2, *lp_ball(p, 2), opt);
    const double expected = std::isinf(p) ? 0.5 : 0.5 * std::pow(2.0, 1.0 / p);
    check_value(tag("covering_radius_Z2_lp", "p", p), r.value, expected, cfg.tol.lattice_exact, r.resolution);
  }
  {
    const auto r = covering_radius(Z3, *lp_ball(2, 3), opt3);
    check_value("covering_radius_Z3_l2", r.value, 0.5 * std::sqrt(3.0), cfg.tol.lattice_3d, r.resolution);
  }
  for (double c : {0.3, inv_psi(0.5)}) {
    const auto r = covering_radius(Z2, *slab(unit(2, 1), c), opt);
    check_value(tag("covering_radius_Z2_slab", "c", c), r.value, 0.5 / c, cfg.tol.lattice, r.resolution);
  }
  {
    Mat D(2, 2);
    D << 1, 0, 0, 3;
    const auto m1 = successive_minima(Z2, *lp_ball(2, 2), 2);
    const auto m2 = successive_minima(LatticeBasis(D), *lp_ball(2, 2), 2);
    const auto m3 = successive_minima(Z2, *lp_ball(kInfinityNorm, 2), 2);
    const double err = std::max({std::abs(m1[0] - 1), std::abs(m1[1] - 1), std::abs(m2[0] - 1), std::abs(m2[1] - 3),
                                 std::abs(m3[0] - 1), std::abs(m3[1] - 1)});
    rep.add_check(S, "successive_minima_named", true, err <= 1e-9, err, "Z^2 and diag(1,3) Z^2 against l_2, l_inf");
  }
  {
    const auto a = alpha_certificate(Z2, *lp_ball(2, 2), *lp_ball(2, 2), opt);
    check_value("alpha_certificate_Z2_l2", a.ratio, 0.5 * std::sqrt(2.0), cfg.tol.lattice_exact, a.mu_resolution);
    const double c = inv_psi(0.25);
    const auto s = alpha_certificate(Z2, *lp_ball(2, 2), *slab(unit(2, 1), c), opt);
    check_value("alpha_certificate_slab_p=0.25", s.ratio, f_alpha(0.25), cfg.tol.lattice, s.mu_resolution);
    const auto a3 = alpha_certificate(Z3, *lp_ball(2, 3), *lp_ball(2, 3), opt3);
    check_value("alpha_certificate_Z3_l2", a3.ratio, 0.5 * std::sqrt(3.0), cfg.tol.lattice_3d, a3.mu_resolution);
  }
  rep.add_table(std::move(lt));

  CoveringOptions topt = opt;
  topt.grid = std::max(8, cfg.lattice_grid / 2);
  const auto ts = run_tensor_suite(cfg.tensor_instances, cfg.seed, cfg.tol.lattice, topt);
  rep.add_check(S, "tensorization_preserves_covering_radius", false, ts.violations == 0, ts.worst_difference,
                std::to_string(ts.instances) + " instances; value is max |mu(L + Z e, V x R) - mu(L, V)|");
  Table tt{"tensorization", {"instance", "label", "mu_base", "mu_extended", "difference"}, {}};
  for (std::size_t i = 0; i < ts.reports.size(); ++i) {
    const auto& r = ts.reports[i];
    tt.rows.push_back({static_cast<long long>(i), tensor_instance(cfg.seed, i).label, r.mu_base, r.mu_extended, r.difference});
  }
  rep.add_table(std::move(tt));
}

// ------------------------------------------------------------ balancing ---

void suite_balancing(const RunConfig& cfg, Report& rep) {
  const std::string S = "balancing";
  const auto b2 = lp_ball(2, 2);
  {
    const double v1 = min_sign_balance(VectorTuple({unit(2, 0), unit(2, 0)}), *b2).value;
    const double v2 = min_sign_balance(VectorTuple({unit(2, 0), unit(2, 1)}), *b2).value;
    double worst = std::max(std::abs(v1), std::abs(v2 - std::sqrt(2.0)));
    for (int n = 1; n <= 6; ++n) {
      const double v = min_sign_balance(VectorTuple::from_columns(Mat::Identity(n, n)), *lp_ball(2, n)).value;
      worst = std::max(worst, std::abs(v - std::sqrt(static_cast<double>(n))));
    }
    rep.add_check(S, "exact_balancing_values", true, worst <= 1e-12, worst,
                  "cancelling pair, orthogonal pair, orthonormal bases in dimensions 1-6");
  }

  CoveringOptions opt;
  opt.grid = cfg.lattice_grid;
  Table at{"alpha_le_beta", {"instance", "label", "mu", "beta_subset", "slack"}, {}};
  struct Named {
    std::string label;
    Mat basis;
    BodyPtr body;
  };
  const std::vector<Named> named = {{"e1,e2 in l2", Mat::Identity(2, 2), lp_ball(2, 2)},
                                    {"e1,e2,e3 in linf", Mat::Identity(3, 3), lp_ball(kInfinityNorm, 3)},
                                    {"e1,e2,e3 in l2", Mat::Identity(3, 3), lp_ball(2, 3)}};
  bool named_ok = true;
  double named_slack = kInf;
  for (const auto& nm : named) {
    CoveringOptions o = opt;
    if (nm.basis.cols() == 3) o.grid = std::max(8, cfg.lattice_grid / 3);
    const auto r = verify_alpha_le_beta(VectorTuple::from_columns(nm.basis), *nm.body, cfg.tol.lattice, o);
    named_ok = named_ok && r.holds;
    named_slack = std::min(named_slack, r.slack);
    at.rows.push_back({std::string("named"), nm.label, r.mu, r.beta_sub, r.slack});
  }
  rep.add_check(S, "covering_radius_below_subset_balancing_named", true, named_ok, named_slack);
  const auto suite = run_alpha_beta_suite(cfg.random_instances, cfg.seed, cfg.tol.lattice, opt);
  for (std::size_t i = 0; i < suite.reports.size(); ++i) {
    const auto& r = suite.reports[i];
    at.rows.push_back({static_cast<long long>(i), random_alpha_beta_instance(cfg.seed, i).label, r.mu, r.beta_sub, r.slack});
  }
  rep.add_check(S, "covering_radius_below_subset_balancing_random", true, suite.violations == 0, suite.worst_slack,
                std::to_string(suite.instances) + " seeded planar instances; value is min slack");
  rep.add_table(std::move(at));

  Table dt{"dyadic_decomposition", {"instance", "depth", "points", "beta_subset", "identity_error", "max_excess"}, {}};
  bool dyadic_ok = true;
  double worst_excess = -kInf;
  std::vector<std::pair<std::string, std::pair<VectorTuple, BodyPtr>>> cases = {
      {"e1,e2 in l2", {VectorTuple::from_columns(Mat::Identity(2, 2)), lp_ball(2, 2)}},
      {"e1,e2 in linf", {VectorTuple::from_columns(Mat::Identity(2, 2)), lp_ball(kInfinityNorm, 2)}}};
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto inst = random_alpha_beta_instance(cfg.seed, i);
    cases.push_back({"random " + inst.label, {inst.tuple, inst.body}});
  }
  for (const auto& [label, tb] : cases)
    for (int k = 1; k <= 6; ++k) {
      const auto r = verify_dyadic_grid(tb.first, *tb.second, k);
      dyadic_ok = dyadic_ok && r.holds;
      worst_excess = std::max(worst_excess, r.max_excess);
      dt.rows.push_back({label, static_cast<long long>(k), r.points, r.beta_sub, r.max_identity_error, r.max_excess});
    }
  rep.add_check(S, "dyadic_decomposition", true, dyadic_ok, worst_excess,
                "full depth-k grids, k <= 6; value is max gauge(v) - (1 - 2^-k) beta_subset");
  rep.add_table(std::move(dt));
}

// ------------------------------------------------------- counterexample ---

void suite_counterexample(const RunConfig& cfg, Report& rep) {
  const std::string S = "counterexample";
  const auto ps = select(cfg.p_list, true, {0.25});
  Table ct{"counterexample",
           {"p", "t", "d", "s", "gamma", "gamma_shifted", "delta", "beta_lb", "min_balance"}, {}};
  for (double p : ps) {
    if (!(p < 0.5)) continue;
    const auto insts = build_counterexample(p, {1e-1, 1e-2, 1e-3});
    bool measure_ok = true, cert_ok = true, geometry_ok = true, growth_ok = true;
    double worst_cert = kInf;
    for (std::size_t i = 0; i < insts.size(); ++i) {
      const auto& in = insts[i];
      ct.rows.push_back({in.p, in.t, in.d, in.s, in.gamma, in.gamma_shifted, in.delta, in.beta_lb, in.min_balance});
      measure_ok = measure_ok && in.gamma_shifted >= p && in.gamma - 0.5 * in.s > p;
      cert_ok = cert_ok && in.min_balance >= in.beta_lb - cfg.tol.balance;
      worst_cert = std::min(worst_cert, in.min_balance - in.beta_lb);
      geometry_ok = geometry_ok && in.ball_inside && (in.s >= 0.5 * in.delta || in.sums_outside);
      if (i > 0) {
        const double growth = in.beta_lb / insts[i - 1].beta_lb;
        const double expected = insts[i - 1].s / in.s;
        growth_ok = growth_ok && std::abs(growth - expected) <= 1e-12 * expected;
      }
    }
    rep.add_check(S, tag("measure_stays_above_p", "p", p), true, measure_ok, insts.back().gamma_shifted - p);
    rep.add_check(S, tag("balancing_certificate", "p", p), true, cert_ok, worst_cert,
                  "min over signs of the shifted-cone gauge minus delta/s");
    rep.add_check(S, tag("lower_bound_scales_as_inverse_shift", "p", p), true, growth_ok, insts.back().beta_lb);
    rep.add_check(S, tag("geometry", "p", p), true, geometry_ok, insts.front().delta,
                  "inscribed translate of 2 B_2^2; signed sums outside the shifted cone");
  }
  rep.add_table(std::move(ct));
}

// --------------------------------------------------------------- bounds ---

void suite_bounds(const RunConfig& cfg, Report& rep) {
  const std::string S = "bounds";
  const std::vector<int> dims = {1, 2, 5, 10, 20, 40};
  const std::vector<double> ps =
      cfg.p_list.empty() ? std::vector<double>{0.01, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.99, 0.999} : cfg.p_list;
  Table bt{"bounds", {"p", "f", "f_alpha", "f_beta", "q"}, {}};
  Table nt{"dimension_bounds", {"p", "n", "p_n", "f_n", "r_ball", "r_ball_literal", "t_pn"}, {}};
  for (double p : ps) {
    const auto b = bound_profile(p, dims);
    bt.rows.push_back({p, b.f, b.f_alpha, b.f_beta, b.q.value_or(kNaN)});
    for (int n : dims) {
      if (p > 0.5)
        nt.rows.push_back({p, static_cast<long long>(n), p_n(p, n), b.f_n.at(n), b.r_ball.at(n), r_ball_literal(p, n), b.t_pn.at(n)});
      else
        nt.rows.push_back({p, static_cast<long long>(n), kNaN, kNaN, kNaN, kNaN, b.t_pn.at(n)});
    }
  }
  rep.add_table(std::move(bt));
  rep.add_table(std::move(nt));

  double eq_err = 0.0, ratio_err = 0.0;
  bool monotone = true;
  double prev_f = kInf, prev_fb = kInf;
  const double target_ratio = 10.0 * inv_psi(0.5);
  for (int i = 1; i <= 1000; ++i) {
    const double p = 0.999 * i / 1000.0;
    const double f = f_theorem(p), fa = f_alpha(p), fb = f_beta(p);
    eq_err = std::max(eq_err, std::abs(f - fa));
    if (p <= 0.5) ratio_err = std::max(ratio_err, std::abs(fb / fa - target_ratio) / target_ratio);
    monotone = monotone && f <= prev_f && fb <= prev_fb;
    prev_f = f;
    prev_fb = fb;
  }
  rep.add_check(S, "f_equals_f_alpha", true, eq_err <= cfg.tol.bounds, eq_err);
  rep.add_check(S, "f_beta_over_f_alpha", true, ratio_err <= cfg.tol.bounds, ratio_err, "relative to 10 Psi^-1(1/2)");
  rep.add_check(S, "bounds_non_increasing", true, monotone, 0.0);
  const double limit_gap = std::abs(f_n(0.75, 40) - f_theorem(0.5));
  rep.add_check(S, "f_n_limit_at_n=40", true, limit_gap <= cfg.tol.limit, limit_gap);
  const double ball_gap = f_n(0.999, 5) - r_ball(0.999, 5);
  rep.add_check(S, "ball_bound_beats_f_n[n=5,p=0.999]", true, ball_gap > 0.0, ball_gap,
                "f_n - sqrt(n)/(2 Phi^-1(p))");
  const double literal_gap = f_n(0.999, 5) - r_ball_literal(0.999, 5);
  rep.add_check(S, "literal_ball_comparison[n=5,p=0.999]", false, literal_gap > 0.0, literal_gap,
                "f_n - sqrt(n)/Phi^-1(p); holds only much closer to p = 1");

  Table rt{"ratio_infimum", {"n", "inf_value", "argmin_p", "normalized"}, {}};
  for (int n : {100, 1000, 10000, 100000, 1000000}) {
    const auto r = ratio_infimum(n);
    rt.rows.push_back({static_cast<long long>(n), r.inf_value, r.argmin_p, r.normalized});
    if (n == 100 || n == 10000 || n == 1000000) {
      rep.add_check(S, tag("ratio_infimum_band", "n", n), true, r.normalized >= 0.2 && r.normalized <= 5.0, r.normalized,
                    "inf / sqrt(ln n) in [0.2, 5]");
      const double lower = 2.0 * r.inf_value - std::sqrt(std::log(static_cast<double>(n)));
      rep.add_check(S, tag("ratio_infimum_lower", "n", n), true, lower >= 0.0, lower, "2 inf - sqrt(ln n)");
    }
  }
  rep.add_table(std::move(rt));

  Table lt{"limit_bounds", {"p", "n", "R_p", "beta_ratio", "alpha_ratio", "paper_bound", "applies"}, {}};
  for (double p : {0.9, 0.99, 0.999}) {
    const auto rows = limit_lower_bounds(p, {10, 100, 1000, 10000});
    bool ok = true, increasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      lt.rows.push_back({p, static_cast<long long>(r.n), r.radius, r.beta_ratio, r.alpha_ratio, r.paper_bound,
                         std::string(r.bound_applies ? "true" : "false")});
      ok = ok && r.holds;
      if (i > 0) increasing = increasing && r.beta_ratio > rows[i - 1].beta_ratio;
    }
    rep.add_check(S, tag("concentration_lower_bound", "p", p), true, ok, rows.back().beta_ratio);
    rep.add_check(S, tag("concentration_ratio_increasing", "p", p), true, increasing, rows.back().beta_ratio);
  }
  rep.add_table(std::move(lt));
}

}  // namespace

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("tolerance '" + key + "' must be a positive number");
  struct Field {
    const char* name;
    double Tolerances::*member;
  };
  static constexpr Field fields[] = {
      {"endpoint", &Tolerances::endpoint},     {"derivative", &Tolerances::derivative},
      {"convexity", &Tolerances::convexity},   {"steiner", &Tolerances::steiner},
      {"slice", &Tolerances::slice},           {"ehrhard", &Tolerances::ehrhard},
      {"concavity", &Tolerances::concavity},   {"lattice_exact", &Tolerances::lattice_exact},
      {"lattice_3d", &Tolerances::lattice_3d}, {"lattice", &Tolerances::lattice},
      {"balance", &Tolerances::balance},       {"bounds", &Tolerances::bounds},
      {"limit", &Tolerances::limit},
  };
  for (const auto& f : fields)
    if (key == f.name) {
      tol.*(f.member) = value;
      return;
    }
  throw std::invalid_argument("unknown tolerance '" + key + "'");
}

Command parse_command(const std::string& name) {
  for (const auto& c : kCommands)
    if (name == c.name) return c.command;
  throw std::invalid_argument("unknown command '" + name + "'");
}

std::string to_string(Command command) {
  for (const auto& c : kCommands)
    if (c.command == command) return c.name;
  return "unknown";
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

RunConfig config_from_json(const Json& doc, RunConfig cfg) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  auto positive_int = [&](const char* key, int& target) {
    if (const auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number_integer() || it->get<long long>() < 1)
        throw std::invalid_argument(std::string("config: '") + key + "' must be a positive integer");
      target = it->get<int>();
    }
  };
  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"command", "p", "grid", "lattice_grid", "planar_regions", "steiner_cones",
                                  "random_instances", "tensor_instances", "seed", "tolerances", "out", "format"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw std::invalid_argument("config: unknown key '" + key + "'");
    (void)value;
  }
  if (const auto it = doc.find("command"); it != doc.end()) cfg.command = parse_command(it->get<std::string>());
  if (const auto it = doc.find("p"); it != doc.end()) {
    if (!it->is_array()) throw std::invalid_argument("config: 'p' must be an array of probabilities");
    cfg.p_list.clear();
    for (const auto& v : *it) {
      if (!v.is_number()) throw std::invalid_argument("config: 'p' entries must be numbers");
      cfg.p_list.push_back(v.get<double>());
    }
  }
  positive_int("grid", cfg.grid);
  positive_int("lattice_grid", cfg.lattice_grid);
  positive_int("planar_regions", cfg.planar_regions);
  positive_int("steiner_cones", cfg.steiner_cones);
  positive_int("random_instances", cfg.random_instances);
  positive_int("tensor_instances", cfg.tensor_instances);
  if (const auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw std::invalid_argument("config: 'seed' must be a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (const auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) throw std::invalid_argument("config: 'tolerances' must be an object");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_number()) throw std::invalid_argument("config: tolerance '" + key + "' must be a number");
      set_tolerance(cfg.tol, key, value.get<double>());
    }
  }
  if (const auto it = doc.find("out"); it != doc.end()) cfg.out = it->get<std::string>();
  if (const auto it = doc.find("format"); it != doc.end()) cfg.format = parse_format(it->get<std::string>());
  return cfg;
}

Report build_report(const RunConfig& cfg) {
  for (double p : cfg.p_list)
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("probabilities must lie in (0, 1), got " + format_number(p));
  if (cfg.grid < 3) throw std::invalid_argument("grid must be at least 3");
  Report rep(to_string(cfg.command));
  const bool all = cfg.command == Command::all;
  if (all || cfg.command == Command::verify_cone) suite_cone(cfg, rep);
  if (all || cfg.command == Command::verify_claims) suite_claims(cfg, rep);
  if (all || cfg.command == Command::verify_planar) suite_planar(cfg, rep);
  if (all || cfg.command == Command::verify_lattice) suite_lattice(cfg, rep);
  if (all || cfg.command == Command::verify_balancing) suite_balancing(cfg, rep);
  if (all || cfg.command == Command::counterexample) suite_counterexample(cfg, rep);
  if (all || cfg.command == Command::bounds_table) suite_bounds(cfg, rep);
  return rep;
}

int run(const RunConfig& cfg, std::ostream& fallback) {
  const Report rep = build_report(cfg);
  std::ofstream file;
  std::ostream* out = &fallback;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
    out = &file;
  }
  if (cfg.format == Format::json)
    rep.write_json(*out);
  else
    rep.write_csv(*out);
  out->flush();
  if (!*out) throw std::runtime_error("failed writing the report");
  return rep.hard_passed() ? 0 : 1;
}

}  // namespace gaussbalance
