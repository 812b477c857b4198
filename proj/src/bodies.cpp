#include "gaussbalance/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gaussbalance {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls f(indices) for every k-subset of {0, ..., m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == k) {
      f(idx);
      return;
    }
    for (int i = start; i <= m - (k - pos); ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::lp_ball: return "lp_ball";
    case BodyKind::slab: return "slab";
    case BodyKind::polytope: return "polytope";
    case BodyKind::shifted_cone: return "shifted_cone";
    case BodyKind::scaled: return "scaled";
    case BodyKind::translated: return "translated";
    case BodyKind::extended: return "extended";
  }
  return "unknown";
}

double ConvexBody::gauge(const Vec& x) const {
  const double norm = x.norm();
  if (norm == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 2.0 * norm / inradius();
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (contains(x / mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

LpBall::LpBall(double p, int n, double radius) : p_(p), n_(n), radius_(radius) {
  if (!(p >= 1.0)) throw std::invalid_argument("LpBall: need p >= 1");
  if (n < 1) throw std::invalid_argument("LpBall: need n >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("LpBall: need finite radius > 0");
}

double LpBall::gauge(const Vec& x) const {
  double norm;
  if (std::isinf(p_))
    norm = x.lpNorm<Eigen::Infinity>();
  else if (p_ == 1.0)
    norm = x.lpNorm<1>();
  else if (p_ == 2.0)
    norm = x.norm();
  else {
    const double scale = x.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / scale, p_);
    norm = scale * std::pow(sum, 1.0 / p_);
  }
  return norm / radius_;
}

double LpBall::inradius() const {
  if (p_ >= 2.0) return radius_;
  return radius_ * std::pow(static_cast<double>(n_), 0.5 - 1.0 / p_);
}

double LpBall::outer_radius() const {
  if (p_ <= 2.0) return radius_;
  const double exponent = std::isinf(p_) ? 0.5 : 0.5 - 1.0 / p_;
  return radius_ * std::pow(static_cast<double>(n_), exponent);
}

Slab::Slab(Vec normal, double half_width) : normal_(std::move(normal)), half_width_(half_width) {
  const double norm = normal_.norm();
  if (normal_.size() < 1 || !(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("Slab: normal must be finite and nonzero");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw std::invalid_argument("Slab: need finite half-width > 0");
  normal_ /= norm;
}

Polytope::Polytope(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  const int m = static_cast<int>(A_.rows());
  const int n = static_cast<int>(A_.cols());
  if (m < 1 || n < 1 || b_.size() != m) throw std::invalid_argument("Polytope: shape mismatch");
  if (!A_.allFinite() || !b_.allFinite()) throw std::invalid_argument("Polytope: entries must be finite");
  for (int i = 0; i < m; ++i) {
    if (!(b_[i] > 0.0)) throw std::invalid_argument("Polytope: need b > 0 (origin interior)");
    if (A_.row(i).norm() == 0.0) throw std::invalid_argument("Polytope: zero constraint row");
  }

  inradius_ = kInf;
  for (int i = 0; i < m; ++i) inradius_ = std::min(inradius_, b_[i] / A_.row(i).norm());

  // Symmetric iff every normalized row has its negation among the rows.
  Mat normalized(m, n);
  for (int i = 0; i < m; ++i) normalized.row(i) = A_.row(i) / b_[i];
  symmetric_ = true;
  for (int i = 0; i < m && symmetric_; ++i) {
    bool found = false;
    for (int j = 0; j < m && !found; ++j)
      found = (normalized.row(i) + normalized.row(j)).norm() <= 1e-12 * normalized.row(i).norm();
    symmetric_ = found;
  }

  // Bounded iff the recession cone {d : A d <= 0} is {0}. With rank(A) = n
  // that cone is pointed, so it is trivial iff none of its candidate extreme
  // rays (kernels of (n-1)-row subsystems) is feasible.
  Eigen::FullPivLU<Mat> lu(A_);
  bool bounded = lu.rank() == n;
  if (bounded && n > 1) {
    for_each_subset(m, n - 1, [&](const std::vector<int>& rows) {
      if (!bounded) return;
      Mat sub(n - 1, n);
      for (int r = 0; r < n - 1; ++r) sub.row(r) = normalized.row(rows[r]);
      Eigen::FullPivLU<Mat> sub_lu(sub);
      if (sub_lu.rank() != n - 1) return;
      const Vec dir = sub_lu.kernel().col(0);
      for (double sign : {1.0, -1.0}) {
        const Vec v = normalized * (sign * dir);
        if (v.maxCoeff() <= 1e-12 * dir.norm()) bounded = false;
      }
    });
  } else if (bounded && n == 1) {
    bounded = normalized.maxCoeff() > 0.0 && normalized.minCoeff() < 0.0;
  }

  outer_radius_ = kInf;
  if (bounded) {
    double r = 0.0;
    for_each_subset(m, n, [&](const std::vector<int>& rows) {
      Mat sub(n, n);
      Vec rhs(n);
      for (int k = 0; k < n; ++k) {
        sub.row(k) = A_.row(rows[k]);
        rhs[k] = b_[rows[k]];
      }
      Eigen::FullPivLU<Mat> sub_lu(sub);
      if (!sub_lu.isInvertible()) return;
      const Vec x = sub_lu.solve(rhs);
      if (((A_ * x) - b_).maxCoeff() <= 1e-9 * (1.0 + b_.cwiseAbs().maxCoeff())) r = std::max(r, x.norm());
    });
    outer_radius_ = r;
  }
}

double Polytope::gauge(const Vec& x) const {
  double g = 0.0;
  for (Eigen::Index i = 0; i < A_.rows(); ++i) g = std::max(g, A_.row(i).dot(x) / b_[i]);
  return g;
}

ShiftedCone::ShiftedCone(int n, double d, double t, double s) : n_(n), d_(d), t_(t), s_(s) {
  if (n < 2) throw std::invalid_argument("ShiftedCone: need n >= 2");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("ShiftedCone: need finite t > 0");
  if (!(s > 0.0) || !(s < d) || !std::isfinite(d)) throw std::invalid_argument("ShiftedCone: need 0 < s < d < inf");
}

double ShiftedCone::gauge(const Vec& x) const {
  // x in r C'_s  <=>  |x'| <= t (x_n + r s)  and  x_n + r s <= r d.
  const double axial = x[n_ - 1];
  const double radial = x.head(n_ - 1).norm();
  return std::max({0.0, (radial / t_ - axial) / s_, axial / (d_ - s_)});
}

double ShiftedCone::inradius() const { return std::min(s_ * t_ / std::sqrt(1.0 + t_ * t_), d_ - s_); }

double ShiftedCone::outer_radius() const { return std::max(s_, std::hypot(d_ - s_, t_ * d_)); }

ScaledBody::ScaledBody(BodyPtr base, double factor) : base_(std::move(base)), factor_(factor) {
  if (!base_) throw std::invalid_argument("ScaledBody: null base");
  if (!(factor > 0.0) || !std::isfinite(factor)) throw std::invalid_argument("ScaledBody: need finite factor > 0");
}

TranslatedBody::TranslatedBody(BodyPtr base, Vec shift) : base_(std::move(base)), shift_(std::move(shift)) {
  if (!base_) throw std::invalid_argument("TranslatedBody: null base");
  if (shift_.size() != base_->dimension() || !shift_.allFinite())
    throw std::invalid_argument("TranslatedBody: shift dimension mismatch");
  const double g = base_->gauge(-shift_);
  if (!(g < 1.0)) throw std::domain_error("TranslatedBody: the origin is not interior to the translate");
  // V contains -shift and r_in B, hence -shift + (1 - g) r_in B.
  inradius_ = (1.0 - g) * base_->inradius();
}

ExtendedBody::ExtendedBody(BodyPtr base) : base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("ExtendedBody: null base");
}

BodyPtr lp_ball(double p, int n, double radius) { return std::make_shared<LpBall>(p, n, radius); }
BodyPtr slab(Vec normal, double half_width) { return std::make_shared<Slab>(std::move(normal), half_width); }
BodyPtr polytope(Mat A, Vec b) { return std::make_shared<Polytope>(std::move(A), std::move(b)); }
BodyPtr shifted_cone(int n, double d, double t, double s) { return std::make_shared<ShiftedCone>(n, d, t, s); }
BodyPtr scaled(BodyPtr base, double factor) { return std::make_shared<ScaledBody>(std::move(base), factor); }
BodyPtr translated(BodyPtr base, Vec shift) { return std::make_shared<TranslatedBody>(std::move(base), std::move(shift)); }
BodyPtr extended(BodyPtr base) { return std::make_shared<ExtendedBody>(std::move(base)); }

void require_interior_origin(const ConvexBody& body) {
  const double r = body.inradius();
  if (!(r > 0.0)) throw std::domain_error("gauge: the origin is not interior (inradius is zero)");
  const int n = body.dimension();
  for (int i = 0; i < n; ++i)
    for (double sign : {0.5, -0.5}) {
      Vec probe = Vec::Zero(n);
      probe[i] = sign * r;
      if (!body.contains(probe)) throw std::domain_error("gauge: the origin is not interior");
    }
}

double gauge_norm(const ConvexBody& body, const Vec& x) {
  if (x.size() != body.dimension()) throw std::invalid_argument("gauge: dimension mismatch");
  require_interior_origin(body);
  return body.gauge(x);
}

}  // namespace gaussbalance
