#pragma once

// Small-dimension lattice computations: successive minima by enumeration,
// covering radius by fundamental-domain search, and the certificates built
// on them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaussbalance/balancing.hpp"
#include "gaussbalance/bodies.hpp"
#include "gaussbalance/parallel.hpp"

namespace gaussbalance {

inline constexpr int kMaxMinimaDimension = 4;
inline constexpr int kMaxCoveringDimension = 3;

/// L = B Z^n for an invertible n x n basis B (columns are generators).
class LatticeBasis {
 public:
  explicit LatticeBasis(Mat basis);
  static LatticeBasis identity(int n);

  int dimension() const { return static_cast<int>(basis_.cols()); }
  const Mat& matrix() const { return basis_; }
  Mat gram() const { return basis_.transpose() * basis_; }
  double determinant() const { return basis_.determinant(); }
  /// Same lattice scaled by a > 0.
  LatticeBasis scaled(double a) const { return LatticeBasis(a * basis_); }
  /// Basis B M; the same lattice when M is unimodular.
  LatticeBasis transformed(const Mat& M) const { return LatticeBasis(basis_ * M); }

 private:
  Mat basis_;
};

/// LLL-reduced basis (delta = 3/4) of the same lattice.
Mat lll_reduce(const Mat& basis, double delta = 0.75);

/// lambda_1..lambda_{k_max}. U must be symmetric and bounded. The
/// enumeration box is widened (radius doubled) until k_max independent
/// vectors are found; throws std::runtime_error, quoting the radius, if the
/// search gives up.
std::vector<double> successive_minima(const LatticeBasis& L, const ConvexBody& U, int k_max);

struct CoveringOptions {
  int grid = 64;                       // points per generator direction
  int refine = 8;                      // grid maxima polished by pattern search
  std::optional<double> search_radius; // Euclidean radius of candidate lattice points
  std::vector<int> axis_grid;          // per-generator grid sizes; overrides `grid`
  bool reduce = true;                  // LLL-reduce the basis before gridding
  Exec exec = Exec::parallel;
};

struct CoveringResult {
  double value;
  double resolution;  // diameter of one grid cell
  int candidates;     // lattice points examined per grid point
  double search_radius;
};

/// mu(L, V) = max_x min_l gauge_V(x - l), maximized over a grid on the
/// reduced fundamental parallelepiped and refined locally. The grid value is
/// a lower estimate; its error is governed by `resolution`.
CoveringResult covering_radius(const LatticeBasis& L, const ConvexBody& V, const CoveringOptions& opt = {});

struct AlphaCertificate {
  LatticeBasis lattice;
  double lambda_n;
  double mu;
  double ratio;  // mu / lambda_n, a lower bound on alpha(U, V)
  double mu_resolution;
};

AlphaCertificate alpha_certificate(const LatticeBasis& L, const ConvexBody& U, const ConvexBody& V,
                                   const CoveringOptions& opt = {});

struct AlphaBetaReport {
  double mu;
  double beta_sub;
  double slack;  // beta_sub + tolerance - mu
  bool holds;
};

/// mu(L, V) <= beta_subset(tuple, V) + tolerance for L spanned by the tuple.
AlphaBetaReport verify_alpha_le_beta(const VectorTuple& tuple, const ConvexBody& V, double tolerance = 3e-2,
                                     const CoveringOptions& opt = {});

struct TensorReport {
  double mu_base;
  double mu_extended;
  double difference;  // mu_extended - mu_base
  bool holds;
};

/// Compares mu(L, V) with mu(L + Z e_{n+1}, V x R); n <= 2.
TensorReport tensor_extend(const LatticeBasis& L, const BodyPtr& V, double tolerance = 3e-2,
                           const CoveringOptions& opt = {});

/// A random basis of two vectors from the unit disk (|det| >= 0.1) and a
/// body chosen by `index` mod 3: B_2^2, B_inf^2, or a random slab.
struct AlphaBetaInstance {
  VectorTuple tuple;
  BodyPtr body;
  std::string label;
};

AlphaBetaInstance random_alpha_beta_instance(std::uint64_t seed, std::uint64_t index);

struct AlphaBetaSuite {
  int instances = 0;
  int violations = 0;
  double worst_slack = 0.0;  // min over instances of beta_sub + tol - mu
  std::vector<AlphaBetaReport> reports;
};

AlphaBetaSuite run_alpha_beta_suite(int count, std::uint64_t seed, double tolerance = 3e-2,
                                    const CoveringOptions& opt = {});

/// Instance 0 is Z with [-0.3, 0.3], instance 1 is Z^2 with B_2^2; the rest
/// are random planar lattices with a slab, B_2^2 or B_inf^2.
struct TensorInstance {
  LatticeBasis lattice;
  BodyPtr body;
  std::string label;
};

TensorInstance tensor_instance(std::uint64_t seed, std::uint64_t index);

struct TensorSuite {
  int instances = 0;
  int violations = 0;
  double worst_difference = 0.0;  // max |mu_extended - mu_base|
  std::vector<TensorReport> reports;
};

TensorSuite run_tensor_suite(int count, std::uint64_t seed, double tolerance = 3e-2, const CoveringOptions& opt = {});

}  // namespace gaussbalance
