#pragma once

// Convex bodies given by membership and gauge (Minkowski functional)
// evaluation. Bodies are immutable after construction and safe to share
// across threads.

#include <Eigen/Dense>

#include <limits>
#include <memory>
#include <string>

namespace gaussbalance {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class BodyKind { lp_ball, slab, polytope, shifted_cone, scaled, translated, extended };

std::string to_string(BodyKind kind);

class ConvexBody {
 public:
  virtual ~ConvexBody() = default;

  virtual BodyKind kind() const = 0;
  virtual int dimension() const = 0;
  virtual bool contains(const Vec& x) const = 0;
  /// min{r >= 0 : x in rV}. The default bisects membership along the ray on
  /// [0, 2 |x| / inradius()], to relative tolerance 1e-12.
  virtual double gauge(const Vec& x) const;
  virtual bool symmetric() const = 0;
  /// Radius of a Euclidean ball about the origin contained in the body.
  virtual double inradius() const = 0;
  /// Radius of a Euclidean ball about the origin containing the body, or +inf.
  virtual double outer_radius() const = 0;

  bool bounded() const { return outer_radius() < std::numeric_limits<double>::infinity(); }
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

/// Radius-`radius` ball of the l_p norm in R^n; p in [1, inf].
class LpBall final : public ConvexBody {
 public:
  LpBall(double p, int n, double radius = 1.0);
  BodyKind kind() const override { return BodyKind::lp_ball; }
  int dimension() const override { return n_; }
  bool contains(const Vec& x) const override { return gauge(x) <= 1.0 + 1e-12; }
  double gauge(const Vec& x) const override;
  bool symmetric() const override { return true; }
  double inradius() const override;
  double outer_radius() const override;
  double p() const { return p_; }
  double radius() const { return radius_; }

 private:
  double p_;
  int n_;
  double radius_;
};

/// {x : |<a, x>| <= c} with a the normalized `normal`.
class Slab final : public ConvexBody {
 public:
  Slab(Vec normal, double half_width);
  BodyKind kind() const override { return BodyKind::slab; }
  int dimension() const override { return static_cast<int>(normal_.size()); }
  bool contains(const Vec& x) const override { return gauge(x) <= 1.0 + 1e-12; }
  double gauge(const Vec& x) const override { return std::abs(normal_.dot(x)) / half_width_; }
  bool symmetric() const override { return true; }
  double inradius() const override { return half_width_; }
  double outer_radius() const override { return std::numeric_limits<double>::infinity(); }
  const Vec& normal() const { return normal_; }
  double half_width() const { return half_width_; }

 private:
  Vec normal_;
  double half_width_;
};

/// {x : A x <= b} with b > 0, so that the origin is interior.
class Polytope final : public ConvexBody {
 public:
  Polytope(Mat A, Vec b);
  BodyKind kind() const override { return BodyKind::polytope; }
  int dimension() const override { return static_cast<int>(A_.cols()); }
  bool contains(const Vec& x) const override { return gauge(x) <= 1.0 + 1e-12; }
  double gauge(const Vec& x) const override;
  bool symmetric() const override { return symmetric_; }
  double inradius() const override { return inradius_; }
  double outer_radius() const override { return outer_radius_; }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  Mat A_;
  Vec b_;
  bool symmetric_;
  double inradius_;
  double outer_radius_;
};

/// C'_s = C_{d,t} - s e_n, where C_{d,t} = Conv(0, d(e_n + t B_2^{n-1})) is
/// the cone with apex at the origin, axis e_n, slope t and height d.
/// Requires 0 < s < d so that the origin is interior.
class ShiftedCone final : public ConvexBody {
 public:
  ShiftedCone(int n, double d, double t, double s);
  BodyKind kind() const override { return BodyKind::shifted_cone; }
  int dimension() const override { return n_; }
  bool contains(const Vec& x) const override { return gauge(x) <= 1.0 + 1e-12; }
  double gauge(const Vec& x) const override;
  bool symmetric() const override { return false; }
  double inradius() const override;
  double outer_radius() const override;
  double d() const { return d_; }
  double t() const { return t_; }
  double s() const { return s_; }

 private:
  int n_;
  double d_;
  double t_;
  double s_;
};

/// a V for a > 0.
class ScaledBody final : public ConvexBody {
 public:
  ScaledBody(BodyPtr base, double factor);
  BodyKind kind() const override { return BodyKind::scaled; }
  int dimension() const override { return base_->dimension(); }
  bool contains(const Vec& x) const override { return base_->contains(x / factor_); }
  double gauge(const Vec& x) const override { return base_->gauge(x) / factor_; }
  bool symmetric() const override { return base_->symmetric(); }
  double inradius() const override { return base_->inradius() * factor_; }
  double outer_radius() const override { return base_->outer_radius() * factor_; }
  const BodyPtr& base() const { return base_; }
  double factor() const { return factor_; }

 private:
  BodyPtr base_;
  double factor_;
};

/// V + shift. The origin must stay interior, i.e. gauge_V(-shift) < 1.
class TranslatedBody final : public ConvexBody {
 public:
  TranslatedBody(BodyPtr base, Vec shift);
  BodyKind kind() const override { return BodyKind::translated; }
  int dimension() const override { return base_->dimension(); }
  bool contains(const Vec& x) const override { return base_->contains(x - shift_); }
  bool symmetric() const override { return false; }
  double inradius() const override { return inradius_; }
  double outer_radius() const override { return base_->outer_radius() + shift_.norm(); }
  const BodyPtr& base() const { return base_; }
  const Vec& shift() const { return shift_; }

 private:
  BodyPtr base_;
  Vec shift_;
  double inradius_;
};

/// V x R in R^{n+1}: the last coordinate is unconstrained.
class ExtendedBody final : public ConvexBody {
 public:
  explicit ExtendedBody(BodyPtr base);
  BodyKind kind() const override { return BodyKind::extended; }
  int dimension() const override { return base_->dimension() + 1; }
  bool contains(const Vec& x) const override { return base_->contains(x.head(x.size() - 1)); }
  double gauge(const Vec& x) const override { return base_->gauge(x.head(x.size() - 1)); }
  bool symmetric() const override { return base_->symmetric(); }
  double inradius() const override { return base_->inradius(); }
  double outer_radius() const override { return std::numeric_limits<double>::infinity(); }
  const BodyPtr& base() const { return base_; }

 private:
  BodyPtr base_;
};

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

BodyPtr lp_ball(double p, int n, double radius = 1.0);
BodyPtr slab(Vec normal, double half_width);
BodyPtr polytope(Mat A, Vec b);
BodyPtr shifted_cone(int n, double d, double t, double s);
BodyPtr scaled(BodyPtr base, double factor);
BodyPtr translated(BodyPtr base, Vec shift);
BodyPtr extended(BodyPtr base);

/// Throws std::domain_error unless the origin is interior (checked by
/// membership of 2n points at half the inradius).
void require_interior_origin(const ConvexBody& body);

/// ||x||_V after checking that the origin is interior.
double gauge_norm(const ConvexBody& body, const Vec& x);

}  // namespace gaussbalance
