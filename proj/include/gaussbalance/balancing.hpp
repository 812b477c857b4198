#pragma once

// Exhaustive vector balancing for finite tuples: min over signs of the gauge
// of the signed sum, the subset-balancing constant, and the dyadic
// decomposition that turns subset balancing into a covering statement.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gaussbalance/bodies.hpp"
#include "gaussbalance/parallel.hpp"

namespace gaussbalance {

inline constexpr int kMaxBalanceLength = 24;
inline constexpr int kMaxSubsetLength = 20;
inline constexpr int kMaxDyadicDepth = 12;

/// Thrown when an exhaustive enumeration would exceed its budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Finite list of vectors of a common dimension.
class VectorTuple {
 public:
  VectorTuple(std::vector<Vec> vectors);
  /// Columns of `m` as the vectors.
  static VectorTuple from_columns(const Mat& m);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(vectors_.size()); }
  const Vec& operator[](int i) const { return vectors_[static_cast<std::size_t>(i)]; }
  const std::vector<Vec>& vectors() const { return vectors_; }
  /// Vectors as matrix columns.
  Mat as_matrix() const;

 private:
  std::vector<Vec> vectors_;
  int dimension_;
};

struct BalanceResult {
  double value;
  std::vector<int> signs;  // +1 / -1 per vector; achieves `value`
};

/// Exact min over eps in {+-1}^t of gauge(sum eps_i u_i). Gray-code
/// enumeration in fixed prefix blocks; blocks run in parallel and are reduced
/// in block order, ties broken by (value, sign mask), so the result does not
/// depend on the thread count. Symmetric bodies fix eps_0 = +1.
/// Throws BudgetExceeded for t > 24.
BalanceResult min_sign_balance(const VectorTuple& tuple, const ConvexBody& body, Exec exec = Exec::parallel);

/// Reference implementation: every sign vector's sum recomputed from scratch.
BalanceResult min_sign_balance_reference(const VectorTuple& tuple, const ConvexBody& body);

/// max over Z subset [t] of min_sign_balance({u_i : i in Z}). Throws
/// BudgetExceeded for t > 20.
double beta_subset(const VectorTuple& tuple, const ConvexBody& body, Exec exec = Exec::parallel);

struct Decomposition {
  std::vector<int> delta;  // z0 = sum delta_i u_i, delta in {0,1}^n
  Vec z0;
  Vec v;
  double gauge_v;
};

/// For y = sum (N_i / 2^k) u_i with integers 0 <= N_i <= 2^k, writes
/// y = z0 + v with z0 a vertex of the parallelepiped P and
/// gauge(v) <= (1 - 2^-k) * bound, whenever bound >= beta_subset(tuple).
/// The tuple must be a basis. Throws std::invalid_argument for non-dyadic
/// input or depth > 12.
Decomposition combiclaim_decompose(const VectorTuple& tuple, const ConvexBody& body, const Vec& y, int depth);

struct DyadicGridReport {
  int depth;
  long long points;
  double beta_sub;
  double max_identity_error;  // max |y - z0 - v|
  double max_excess;          // max of gauge(v) - (1 - 2^-k) beta_sub
  bool holds;                 // identity within 1e-12 and excess <= 1e-9
};

/// Decomposes every depth-k dyadic point of the parallelepiped spanned by
/// the tuple and checks the identity and the gauge bound.
DyadicGridReport verify_dyadic_grid(const VectorTuple& tuple, const ConvexBody& body, int depth,
                                    Exec exec = Exec::parallel);

}  // namespace gaussbalance
