#include "gaussbalance/balancing.hpp"

#include <bit>
#include <cmath>
#include <string>
#include <utility>

namespace gaussbalance {
namespace {

constexpr int kBlockBits = 10;

struct Best {
  double value;
  std::uint64_t mask;
};

Best better(const Best& a, const Best& b) {
  return (b.value < a.value || (b.value == a.value && b.mask < a.mask)) ? b : a;
}

// Enumeration problem: gauge(base + sum_i s_i vars[i]) with s_i = -1 iff
// bit i of the mask is set.
struct SignProblem {
  std::vector<const Vec*> vars;
  Vec base;
};

Vec signed_sum(const SignProblem& prob, std::uint64_t mask) {
  Vec sum = prob.base;
  for (std::size_t i = 0; i < prob.vars.size(); ++i) {
    if ((mask >> i) & 1U)
      sum -= *prob.vars[i];
    else
      sum += *prob.vars[i];
  }
  return sum;
}

// Gray-code scan of the 2^low masks whose high bits equal `prefix`.
Best scan_block(const SignProblem& prob, const ConvexBody& body, int low, std::uint64_t prefix) {
  std::uint64_t mask = prefix << low;
  Vec sum = signed_sum(prob, mask);
  Best best{body.gauge(sum), mask};
  const std::uint64_t steps = std::uint64_t{1} << low;
  for (std::uint64_t j = 1; j < steps; ++j) {
    const int bit = std::countr_zero(j);
    mask ^= std::uint64_t{1} << bit;
    if ((mask >> bit) & 1U)
      sum.noalias() -= 2.0 * *prob.vars[static_cast<std::size_t>(bit)];
    else
      sum.noalias() += 2.0 * *prob.vars[static_cast<std::size_t>(bit)];
    best = better(best, Best{body.gauge(sum), mask});
  }
  return best;
}

Best solve(const SignProblem& prob, const ConvexBody& body, Exec exec) {
  const int m = static_cast<int>(prob.vars.size());
  const int low = std::min(m, kBlockBits);
  const std::size_t blocks = std::size_t{1} << (m - low);
  Best best;
  if (exec == Exec::parallel && blocks > 1) {
    const auto per_block = parallel_map(
        blocks, [&](std::size_t b) { return scan_block(prob, body, low, b); }, exec);
    best = per_block.front();
    for (const auto& r : per_block) best = better(best, r);
  } else {
    best = scan_block(prob, body, low, 0);
    for (std::size_t b = 1; b < blocks; ++b) best = better(best, scan_block(prob, body, low, b));
  }
  // Report the value of the winning sum computed without incremental drift.
  best.value = body.gauge(signed_sum(prob, best.mask));
  return best;
}

void check_dimensions(const VectorTuple& tuple, const ConvexBody& body) {
  if (tuple.dimension() != body.dimension()) throw std::invalid_argument("balancing: tuple and body dimensions differ");
}

// Balancing over the vectors selected by `indices`; signs reported per index.
BalanceResult balance_indices(const VectorTuple& tuple, const std::vector<int>& indices, const ConvexBody& body,
                              Exec exec) {
  SignProblem prob;
  prob.base = Vec::Zero(tuple.dimension());
  if (indices.empty()) return {body.gauge(prob.base), {}};
  const bool fix_first = body.symmetric();
  const std::size_t first_var = fix_first ? 1 : 0;
  if (fix_first) prob.base = tuple[indices[0]];
  for (std::size_t i = first_var; i < indices.size(); ++i) prob.vars.push_back(&tuple[indices[i]]);
  const Best best = solve(prob, body, exec);
  BalanceResult r{best.value, std::vector<int>(indices.size(), 1)};
  for (std::size_t i = first_var; i < indices.size(); ++i)
    r.signs[i] = ((best.mask >> (i - first_var)) & 1U) ? -1 : 1;
  return r;
}

}  // namespace

VectorTuple::VectorTuple(std::vector<Vec> vectors) : vectors_(std::move(vectors)), dimension_(0) {
  if (vectors_.empty()) throw std::invalid_argument("VectorTuple: empty tuple");
  dimension_ = static_cast<int>(vectors_.front().size());
  if (dimension_ < 1) throw std::invalid_argument("VectorTuple: zero-dimensional vectors");
  for (const auto& v : vectors_) {
    if (v.size() != dimension_) throw std::invalid_argument("VectorTuple: dimension mismatch");
    if (!v.allFinite()) throw std::invalid_argument("VectorTuple: non-finite entry");
  }
}

VectorTuple VectorTuple::from_columns(const Mat& m) {
  std::vector<Vec> vs;
  for (Eigen::Index j = 0; j < m.cols(); ++j) vs.push_back(m.col(j));
  return VectorTuple(std::move(vs));
}

Mat VectorTuple::as_matrix() const {
  Mat m(dimension_, size());
  for (int j = 0; j < size(); ++j) m.col(j) = vectors_[static_cast<std::size_t>(j)];
  return m;
}

BalanceResult min_sign_balance(const VectorTuple& tuple, const ConvexBody& body, Exec exec) {
  check_dimensions(tuple, body);
  if (tuple.size() > kMaxBalanceLength)
    throw BudgetExceeded("min_sign_balance: " + std::to_string(tuple.size()) + " vectors exceed the budget of " +
                         std::to_string(kMaxBalanceLength));
  std::vector<int> all(static_cast<std::size_t>(tuple.size()));
  for (int i = 0; i < tuple.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return balance_indices(tuple, all, body, exec);
}

BalanceResult min_sign_balance_reference(const VectorTuple& tuple, const ConvexBody& body) {
  check_dimensions(tuple, body);
  if (tuple.size() > kMaxBalanceLength) throw BudgetExceeded("min_sign_balance_reference: budget exceeded");
  const int t = tuple.size();
  BalanceResult best{std::numeric_limits<double>::infinity(), {}};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
    Vec sum = Vec::Zero(tuple.dimension());
    std::vector<int> signs(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) {
      signs[static_cast<std::size_t>(i)] = ((mask >> i) & 1U) ? -1 : 1;
      sum += signs[static_cast<std::size_t>(i)] * tuple[i];
    }
    const double g = body.gauge(sum);
    if (g < best.value) best = {g, std::move(signs)};
  }
  return best;
}

double beta_subset(const VectorTuple& tuple, const ConvexBody& body, Exec exec) {
  check_dimensions(tuple, body);
  if (tuple.size() > kMaxSubsetLength)
    throw BudgetExceeded("beta_subset: " + std::to_string(tuple.size()) + " vectors exceed the budget of " +
                         std::to_string(kMaxSubsetLength));
  const std::size_t subsets = std::size_t{1} << tuple.size();
  const auto values = parallel_map(
      subsets,
      [&](std::size_t s) {
        std::vector<int> idx;
        for (int i = 0; i < tuple.size(); ++i)
          if ((s >> i) & 1U) idx.push_back(i);
        return balance_indices(tuple, idx, body, Exec::serial).value;
      },
      exec);
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return best;
}

namespace {

struct Partial {
  std::vector<int> delta;
  Vec v;
};

// y = sum (N_i / 2^k) u_i  ->  (vertex delta, residual v).
Partial decompose_rec(const VectorTuple& tuple, const ConvexBody& body, const std::vector<long long>& N, int k) {
  const int n = tuple.size();
  if (k == 0) {
    Partial base{std::vector<int>(static_cast<std::size_t>(n)), Vec::Zero(tuple.dimension())};
    for (int i = 0; i < n; ++i) base.delta[static_cast<std::size_t>(i)] = static_cast<int>(N[static_cast<std::size_t>(i)]);
    return base;
  }
  // y = (r + y') / 2 with r a vertex and y' a depth-(k-1) point.
  const long long half = 1LL << (k - 1);
  std::vector<int> r(static_cast<std::size_t>(n));
  std::vector<long long> N_next(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    r[ui] = N[ui] > half ? 1 : 0;
    N_next[ui] = N[ui] - r[ui] * half;
  }
  const Partial inner = decompose_rec(tuple, body, N_next, k - 1);

  // (r + z0')/2 = sum_J u_i + (1/2) sum_Z u_i, where J = both set and Z = exactly
  // one set; balance Z: (1/2) sum_Z u_i = sum_{Z, sigma=-1} u_i + (1/2) sum_Z sigma_i u_i.
  Partial out{std::vector<int>(static_cast<std::size_t>(n), 0), 0.5 * inner.v};
  std::vector<int> Z;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int both = r[ui] + inner.delta[ui];
    if (both == 2) out.delta[ui] = 1;
    if (both == 1) Z.push_back(i);
  }
  if (!Z.empty()) {
    const BalanceResult sigma = balance_indices(tuple, Z, body, Exec::serial);
    for (std::size_t j = 0; j < Z.size(); ++j) {
      const int i = Z[j];
      if (sigma.signs[j] < 0) out.delta[static_cast<std::size_t>(i)] = 1;
      out.v += 0.5 * sigma.signs[j] * tuple[i];
    }
  }
  return out;
}

}  // namespace

Decomposition combiclaim_decompose(const VectorTuple& tuple, const ConvexBody& body, const Vec& y, int depth) {
  check_dimensions(tuple, body);
  if (depth < 0 || depth > kMaxDyadicDepth)
    throw std::invalid_argument("combiclaim_decompose: depth must lie in [0, " + std::to_string(kMaxDyadicDepth) + "]");
  if (tuple.size() != tuple.dimension()) throw std::invalid_argument("combiclaim_decompose: tuple must be a basis");
  if (y.size() != tuple.dimension()) throw std::invalid_argument("combiclaim_decompose: point dimension mismatch");
  const Mat U = tuple.as_matrix();
  Eigen::FullPivLU<Mat> lu(U);
  if (!lu.isInvertible()) throw std::invalid_argument("combiclaim_decompose: vectors are linearly dependent");
  const Vec coeffs = lu.solve(y);
  const double scale = std::ldexp(1.0, depth);
  std::vector<long long> N(static_cast<std::size_t>(tuple.size()));
  for (int i = 0; i < tuple.size(); ++i) {
    const double scaled_coeff = coeffs[i] * scale;
    const double rounded = std::round(scaled_coeff);
    if (std::abs(scaled_coeff - rounded) > 1e-8 || rounded < 0.0 || rounded > scale)
      throw std::invalid_argument("combiclaim_decompose: point is not a depth-" + std::to_string(depth) +
                                  " dyadic point of the parallelepiped");
    N[static_cast<std::size_t>(i)] = static_cast<long long>(rounded);
  }
  Partial part = decompose_rec(tuple, body, N, depth);
  Decomposition d{std::move(part.delta), Vec::Zero(tuple.dimension()), std::move(part.v), 0.0};
  for (int i = 0; i < tuple.size(); ++i)
    if (d.delta[static_cast<std::size_t>(i)]) d.z0 += tuple[i];
  d.gauge_v = body.gauge(d.v);
  return d;
}

DyadicGridReport verify_dyadic_grid(const VectorTuple& tuple, const ConvexBody& body, int depth, Exec exec) {
  const int n = tuple.dimension();
  if (tuple.size() != n) throw std::invalid_argument("verify_dyadic_grid: tuple must be a basis");
  if (depth < 0 || depth > kMaxDyadicDepth) throw std::invalid_argument("verify_dyadic_grid: depth out of range");
  const double beta = beta_subset(tuple, body, Exec::serial);
  const long long side = (1LL << depth) + 1;
  long long points = 1;
  for (int i = 0; i < n; ++i) points *= side;
  const double bound = (1.0 - std::ldexp(1.0, -depth)) * beta;
  const Mat U = tuple.as_matrix();
  struct Item {
    double identity;
    double excess;
  };
  const auto items = parallel_map(
      static_cast<std::size_t>(points),
      [&](std::size_t idx) {
        Vec coeffs(n);
        for (int i = 0; i < n; ++i) {
          coeffs[i] = std::ldexp(static_cast<double>(static_cast<long long>(idx) % side), -depth);
          idx /= static_cast<std::size_t>(side);
        }
        const Vec y = U * coeffs;
        const Decomposition d = combiclaim_decompose(tuple, body, y, depth);
        return Item{(y - d.z0 - d.v).lpNorm<Eigen::Infinity>(), d.gauge_v - bound};
      },
      exec);
  DyadicGridReport r{depth, points, beta, 0.0, -std::numeric_limits<double>::infinity(), true};
  for (const auto& it : items) {
    r.max_identity_error = std::max(r.max_identity_error, it.identity);
    r.max_excess = std::max(r.max_excess, it.excess);
  }
  r.holds = r.max_identity_error <= 1e-12 && r.max_excess <= 1e-9;
  return r;
}

}  // namespace gaussbalance
