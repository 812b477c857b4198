#include "gaussbalance/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace gaussbalance {
namespace {

constexpr long long kMaxEnumeration = 20'000'000;

// Calls f(c) for every integer vector c with |c_i| <= bound_i.
void for_each_in_box(const std::vector<int>& bound, const std::function<void(const Eigen::VectorXi&)>& f) {
  const int n = static_cast<int>(bound.size());
  Eigen::VectorXi c(n);
  for (int i = 0; i < n; ++i) c[i] = -bound[static_cast<std::size_t>(i)];
  while (true) {
    f(c);
    int i = 0;
    while (i < n && c[i] == bound[static_cast<std::size_t>(i)]) {
      c[i] = -bound[static_cast<std::size_t>(i)];
      ++i;
    }
    if (i == n) return;
    ++c[i];
  }
}

// |c_i| <= sqrt((G^-1)_ii) * radius bounds the coefficients of lattice
// vectors of Euclidean norm <= radius.
std::vector<int> coefficient_box(const Mat& B, double radius) {
  const Mat ginv = (B.transpose() * B).inverse();
  std::vector<int> bound(static_cast<std::size_t>(B.cols()));
  long long total = 1;
  for (Eigen::Index i = 0; i < B.cols(); ++i) {
    const double b = std::floor(std::sqrt(ginv(i, i)) * radius + 1e-9);
    if (!(b < 1e6)) throw std::runtime_error("lattice enumeration box too large (radius " + std::to_string(radius) + ")");
    bound[static_cast<std::size_t>(i)] = static_cast<int>(b);
    total *= 2 * static_cast<long long>(b) + 1;
    if (total > kMaxEnumeration)
      throw std::runtime_error("lattice enumeration box too large (radius " + std::to_string(radius) + ")");
  }
  return bound;
}

// Largest norm of a point B c with c in [0,1]^n.
double cell_extent(const Mat& B) {
  const int n = static_cast<int>(B.cols());
  double best = 0.0;
  for (int s = 0; s < (1 << n); ++s) {
    Vec v = Vec::Zero(B.rows());
    for (int i = 0; i < n; ++i)
      if ((s >> i) & 1) v += B.col(i);
    best = std::max(best, v.norm());
  }
  return best;
}

void check_basis_body(const LatticeBasis& L, const ConvexBody& V) {
  if (L.dimension() != V.dimension()) throw std::invalid_argument("lattice and body dimensions differ");
}

}  // namespace

LatticeBasis::LatticeBasis(Mat basis) : basis_(std::move(basis)) {
  const auto n = basis_.cols();
  if (n < 1 || basis_.rows() != n) throw std::invalid_argument("LatticeBasis: basis must be square");
  if (n > kMaxMinimaDimension) throw std::invalid_argument("LatticeBasis: dimension above 4");
  if (!basis_.allFinite()) throw std::invalid_argument("LatticeBasis: non-finite entry");
  const Mat G = gram();
  Eigen::LLT<Mat> llt(G);
  const double scale = G.diagonal().maxCoeff();
  if (llt.info() != Eigen::Success || !(std::abs(basis_.determinant()) > 1e-12 * std::pow(scale, 0.5 * n)))
    throw std::invalid_argument("LatticeBasis: basis is singular");
}

LatticeBasis LatticeBasis::identity(int n) { return LatticeBasis(Mat::Identity(n, n)); }

Mat lll_reduce(const Mat& basis, double delta) {
  Mat B = basis;
  const int n = static_cast<int>(B.cols());
  Mat Bstar(B.rows(), n);
  Mat mu = Mat::Zero(n, n);
  Vec norms(n);
  auto gram_schmidt = [&]() {
    for (int i = 0; i < n; ++i) {
      Bstar.col(i) = B.col(i);
      for (int j = 0; j < i; ++j) {
        mu(i, j) = B.col(i).dot(Bstar.col(j)) / norms[j];
        Bstar.col(i) -= mu(i, j) * Bstar.col(j);
      }
      norms[i] = Bstar.col(i).squaredNorm();
    }
  };
  gram_schmidt();
  int k = 1;
  for (int iter = 0; k < n && iter < 100000; ++iter) {
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        B.col(k) -= q * B.col(j);
        gram_schmidt();
      }
    }
    if (norms[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms[k - 1]) {
      ++k;
    } else {
      B.col(k).swap(B.col(k - 1));
      gram_schmidt();
      k = std::max(k - 1, 1);
    }
  }
  return B;
}

std::vector<double> successive_minima(const LatticeBasis& L, const ConvexBody& U, int k_max) {
  check_basis_body(L, U);
  const int n = L.dimension();
  if (k_max < 1 || k_max > n) throw std::invalid_argument("successive_minima: need 1 <= k_max <= n");
  if (!U.symmetric()) throw std::invalid_argument("successive_minima: body must be symmetric");
  if (!U.bounded()) throw std::invalid_argument("successive_minima: body must be bounded");
  require_interior_origin(U);

  const Mat B = lll_reduce(L.matrix());
  double R = 0.0;
  for (int i = 0; i < n; ++i) R = std::max(R, U.gauge(B.col(i)));
  R *= 2.0;

  for (int attempt = 0; attempt < 8; ++attempt, R *= 2.0) {
    struct Entry {
      double gauge;
      Eigen::VectorXi coeffs;
    };
    std::vector<Entry> entries;
    for_each_in_box(coefficient_box(B, R * U.outer_radius()), [&](const Eigen::VectorXi& c) {
      if (c.isZero()) return;
      const double g = U.gauge(B * c.cast<double>());
      if (g <= R * (1.0 + 1e-12)) entries.push_back({g, c});
    });
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.gauge != b.gauge) return a.gauge < b.gauge;
      return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(), b.coeffs.end());
    });
    // Greedy independent extraction, rank tracked by an orthonormal basis.
    std::vector<Vec> ortho;
    std::vector<double> minima;
    for (const auto& e : entries) {
      Vec v = B * e.coeffs.cast<double>();
      const double norm = v.norm();
      for (const auto& q : ortho) v -= q.dot(v) * q;
      if (v.norm() <= 1e-9 * norm) continue;
      ortho.push_back(v.normalized());
      minima.push_back(e.gauge);
      if (static_cast<int>(minima.size()) == k_max) return minima;
    }
  }
  throw std::runtime_error("successive_minima: enumeration radius " + std::to_string(R) + " insufficient");
}

namespace {

struct CoveringSetup {
  Mat B;
  std::vector<Vec> candidates;
  std::vector<double> candidate_norms;
  double rho;
  double outer;  // outer radius of V (+inf if unbounded)
};

CoveringSetup prepare(const LatticeBasis& L, const ConvexBody& V, const CoveringOptions& opt) {
  CoveringSetup s;
  s.B = opt.reduce ? lll_reduce(L.matrix()) : L.matrix();
  s.outer = V.outer_radius();
  const double extent = cell_extent(s.B);
  double rho;
  if (opt.search_radius)
    rho = *opt.search_radius;
  else if (V.bounded())
    // mu <= extent / r_in, and a gauge-nearest point lies within outer * mu of x.
    rho = extent + s.outer * extent / V.inradius();
  else
    rho = 4.0 * extent;
  s.rho = rho;
  for_each_in_box(coefficient_box(s.B, rho), [&](const Eigen::VectorXi& c) {
    Vec l = s.B * c.cast<double>();
    const double norm = l.norm();
    if (norm <= rho * (1.0 + 1e-12)) {
      s.candidates.push_back(std::move(l));
      s.candidate_norms.push_back(norm);
    }
  });
  // Nearest candidates first so the pruning bound bites early.
  std::vector<std::size_t> order(s.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.candidate_norms[a] < s.candidate_norms[b]; });
  std::vector<Vec> sorted;
  for (std::size_t i : order) sorted.push_back(s.candidates[i]);
  s.candidates = std::move(sorted);
  return s;
}

double local_covering(const CoveringSetup& s, const ConvexBody& V, const Vec& x) {
  double best = std::numeric_limits<double>::infinity();
  const bool prune = std::isfinite(s.outer);
  Vec diff(x.size());
  for (const auto& l : s.candidates) {
    diff = x - l;
    if (prune && diff.norm() / s.outer >= best) continue;
    best = std::min(best, V.gauge(diff));
  }
  return best;
}

}  // namespace

CoveringResult covering_radius(const LatticeBasis& L, const ConvexBody& V, const CoveringOptions& opt) {
  check_basis_body(L, V);
  const int n = L.dimension();
  if (n > kMaxCoveringDimension) throw std::invalid_argument("covering_radius: dimension above 3");
  require_interior_origin(V);
  std::vector<int> sizes = opt.axis_grid.empty() ? std::vector<int>(static_cast<std::size_t>(n), opt.grid) : opt.axis_grid;
  if (static_cast<int>(sizes.size()) != n) throw std::invalid_argument("covering_radius: axis_grid size mismatch");
  for (int g : sizes)
    if (g < 1) throw std::invalid_argument("covering_radius: grid must be positive");

  const CoveringSetup s = prepare(L, V, opt);
  const auto at = [&](const Vec& c) { return local_covering(s, V, s.B * c); };

  std::size_t total = 1;
  for (int g : sizes) total *= static_cast<std::size_t>(g);
  auto coeffs_of = [&](std::size_t idx) {
    Vec c(n);
    for (int i = 0; i < n; ++i) {
      const auto g = static_cast<std::size_t>(sizes[static_cast<std::size_t>(i)]);
      c[i] = static_cast<double>(idx % g) / static_cast<double>(g);
      idx /= g;
    }
    return c;
  };
  const auto values = parallel_map(total, [&](std::size_t idx) { return at(coeffs_of(idx)); }, opt.exec);

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min<std::size_t>(total, static_cast<std::size_t>(std::max(opt.refine, 0)));
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] > values[b] || (values[a] == values[b] && a < b); });

  // Pattern search in lattice coordinates from the best grid points.
  const auto refined = parallel_map(
      top,
      [&](std::size_t r) {
        Vec c = coeffs_of(order[r]);
        double best = values[order[r]];
        double step = 1.0 / *std::max_element(sizes.begin(), sizes.end());
        for (int iter = 0; iter < 4000 && step > 1e-9; ++iter) {
          bool improved = false;
          for (int i = 0; i < n && !improved; ++i)
            for (double sign : {1.0, -1.0}) {
              Vec trial = c;
              trial[i] += sign * step;
              trial[i] -= std::floor(trial[i]);
              const double v = at(trial);
              if (v > best) {
                best = v;
                c = trial;
                improved = true;
                break;
              }
            }
          if (!improved) step *= 0.5;
        }
        return best;
      },
      opt.exec);

  CoveringResult result{0.0, 0.0, static_cast<int>(s.candidates.size()), s.rho};
  for (double v : values) result.value = std::max(result.value, v);
  for (double v : refined) result.value = std::max(result.value, v);
  for (int sgn = 0; sgn < (1 << n); ++sgn) {
    Vec diag = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      diag += (((sgn >> i) & 1) ? 1.0 : -1.0) * s.B.col(i) / sizes[static_cast<std::size_t>(i)];
    result.resolution = std::max(result.resolution, diag.norm());
  }
  return result;
}

AlphaCertificate alpha_certificate(const LatticeBasis& L, const ConvexBody& U, const ConvexBody& V,
                                   const CoveringOptions& opt) {
  const auto minima = successive_minima(L, U, L.dimension());
  const auto cov = covering_radius(L, V, opt);
  return {L, minima.back(), cov.value, cov.value / minima.back(), cov.resolution};
}

AlphaBetaReport verify_alpha_le_beta(const VectorTuple& tuple, const ConvexBody& V, double tolerance,
                                     const CoveringOptions& opt) {
  if (tuple.size() != tuple.dimension()) throw std::invalid_argument("verify_alpha_le_beta: tuple must be a basis");
  const LatticeBasis L(tuple.as_matrix());
  CoveringOptions o = opt;
  if (!o.search_radius && !V.bounded()) {
    // Every point of the original cell lies within beta_sub V of a vertex
    // sum_{i in S} u_i, so lattice points this close suffice.
    double total = 0.0;
    for (const auto& u : tuple.vectors()) total += u.norm();
    const double extent = cell_extent(o.reduce ? lll_reduce(L.matrix()) : L.matrix());
    o.search_radius = std::max(4.0 * extent, extent + 2.0 * total);
  }
  const double mu = covering_radius(L, V, o).value;
  const double beta = beta_subset(tuple, V, opt.exec);
  return {mu, beta, beta + tolerance - mu, mu <= beta + tolerance};
}

TensorReport tensor_extend(const LatticeBasis& L, const BodyPtr& V, double tolerance, const CoveringOptions& opt) {
  const int n = L.dimension();
  if (n > 2) throw std::invalid_argument("tensor_extend: dimension above 2");
  const CoveringResult base_cov = covering_radius(L, *V, opt);
  const double base = base_cov.value;

  const Mat B = opt.reduce ? lll_reduce(L.matrix()) : L.matrix();
  Mat ext = Mat::Zero(n + 1, n + 1);
  ext.topLeftCorner(n, n) = B;
  ext(n, n) = 1.0;
  CoveringOptions o = opt;
  o.reduce = false;
  // Same planar candidates: the k = 0 layer of the lifted search is exactly
  // the planar search.
  o.search_radius = base_cov.search_radius;
  o.axis_grid.assign(static_cast<std::size_t>(n), opt.grid);
  o.axis_grid.push_back(4);
  const BodyPtr V_ext = extended(V);
  const double lifted = covering_radius(LatticeBasis(ext), *V_ext, o).value;
  return {base, lifted, lifted - base, std::abs(lifted - base) <= tolerance};
}

namespace {

Vec random_in_disk(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  Vec v(2);
  v << r * std::cos(phi), r * std::sin(phi);
  return v;
}

Mat random_planar_basis(std::mt19937_64& rng, double min_det) {
  while (true) {
    Mat B(2, 2);
    B.col(0) = random_in_disk(rng);
    B.col(1) = random_in_disk(rng);
    if (std::abs(B.determinant()) >= min_det) return B;
  }
}

BodyPtr random_planar_body(std::mt19937_64& rng, std::uint64_t index, std::string& label) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (index % 3) {
    case 0:
      label = "l2_ball";
      return lp_ball(2.0, 2);
    case 1:
      label = "linf_ball";
      return lp_ball(kInfinityNorm, 2);
    default: {
      const double phi = std::numbers::pi * unit(rng);
      const double c = 0.3 + 0.7 * unit(rng);
      Vec normal(2);
      normal << std::cos(phi), std::sin(phi);
      label = "slab";
      return slab(normal, c);
    }
  }
}

}  // namespace

AlphaBetaInstance random_alpha_beta_instance(std::uint64_t seed, std::uint64_t index) {
  auto rng = item_rng(seed, index);
  const Mat B = random_planar_basis(rng, 0.1);
  std::string label;
  BodyPtr body = random_planar_body(rng, index, label);
  return {VectorTuple::from_columns(B), std::move(body), std::move(label)};
}

AlphaBetaSuite run_alpha_beta_suite(int count, std::uint64_t seed, double tolerance, const CoveringOptions& opt) {
  CoveringOptions inner = opt;
  inner.exec = Exec::serial;
  AlphaBetaSuite suite;
  suite.instances = count;
  suite.reports = parallel_map(
      static_cast<std::size_t>(count),
      [&](std::size_t i) {
        const auto inst = random_alpha_beta_instance(seed, i);
        return verify_alpha_le_beta(inst.tuple, *inst.body, tolerance, inner);
      },
      opt.exec);
  suite.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : suite.reports) {
    if (!r.holds) ++suite.violations;
    suite.worst_slack = std::min(suite.worst_slack, r.slack);
  }
  return suite;
}

TensorInstance tensor_instance(std::uint64_t seed, std::uint64_t index) {
  if (index == 0) return {LatticeBasis::identity(1), lp_ball(2.0, 1, 0.3), "Z1_interval"};
  if (index == 1) return {LatticeBasis::identity(2), lp_ball(2.0, 2), "Z2_l2_ball"};
  auto rng = item_rng(seed, index);
  const Mat B = random_planar_basis(rng, 0.2);
  std::string label;
  BodyPtr body = random_planar_body(rng, index, label);
  return {LatticeBasis(B), std::move(body), "random_" + label};
}

TensorSuite run_tensor_suite(int count, std::uint64_t seed, double tolerance, const CoveringOptions& opt) {
  CoveringOptions inner = opt;
  inner.exec = Exec::serial;
  TensorSuite suite;
  suite.instances = count;
  suite.reports = parallel_map(
      static_cast<std::size_t>(count),
      [&](std::size_t i) {
        const auto inst = tensor_instance(seed, i);
        return tensor_extend(inst.lattice, inst.body, tolerance, inner);
      },
      opt.exec);
  for (const auto& r : suite.reports) {
    if (!r.holds) ++suite.violations;
    suite.worst_difference = std::max(suite.worst_difference, std::abs(r.difference));
  }
  return suite;
}

}  // namespace gaussbalance
