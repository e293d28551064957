#pragma once

// Hyperboloid model of H^3 inside Minkowski space R^{3,1}, signature (-,+,+,+).
// Everything here works in ambient coordinates; tangent vectors at p are the
// 4-vectors Minkowski-orthogonal to p. Only n = 3 is supported.

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace hmcf {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Tolerance on |<p,p> + 1| accepted for a point of the hyperboloid.
inline constexpr double kHyperboloidTol = 1e-10;

/// -p0 q0 + p1 q1 + p2 q2 + p3 q3
inline double minkowski_inner(const Vec4& p, const Vec4& q) noexcept {
  return -p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3];
}

/// Length of a spacelike vector; zero for anything non-spacelike.
double minkowski_norm(const Vec4& v) noexcept;

/// A point of the upper sheet {<x,x> = -1, x0 >= 1}.
class HPoint {
 public:
  HPoint() noexcept : x_(1.0, 0.0, 0.0, 0.0) {}

  static HPoint origin() noexcept { return HPoint(); }

  /// Accepts coordinates already on the hyperboloid within `tol`; throws
  /// DomainError otherwise. Coordinates are stored unmodified.
  static HPoint from_coords(const Vec4& x, double tol = kHyperboloidTol);

  /// Rescales a future-pointing timelike vector onto the hyperboloid.
  static HPoint project(const Vec4& x);

  /// Builds without any check. For inner loops whose inputs are known valid.
  static HPoint unchecked(const Vec4& x) noexcept { return HPoint(x); }

  const Vec4& coords() const noexcept { return x_; }
  double operator[](int i) const noexcept { return x_[i]; }

  /// |<x,x> + 1|
  double constraint_violation() const noexcept;

  friend bool operator==(const HPoint& a, const HPoint& b) noexcept { return a.x_ == b.x_; }

 private:
  explicit HPoint(const Vec4& x) noexcept : x_(x) {}
  Vec4 x_;
};

/// A tangent vector v at `base`, stored in ambient coordinates.
struct HTangent {
  HPoint base;
  Vec4 v = Vec4::Zero();

  double norm() const noexcept { return minkowski_norm(v); }
  /// |<base, v>|
  double tangency_error() const noexcept { return std::abs(minkowski_inner(base.coords(), v)); }
};

/// Geodesic distance arccosh(-<p,q>). Values of -<p,q> up to 1e-9 below one
/// are clamped; anything further below throws DomainError.
double hdist(const HPoint& p, const HPoint& q);

/// cosh of the geodesic distance, clamped to >= 1.
double cosh_dist(const HPoint& p, const HPoint& q) noexcept;

HPoint exp_map(const HPoint& p, const Vec4& v);
inline HPoint exp_map(const HTangent& v) { return exp_map(v.base, v.v); }

/// Inverse of exp_map: the tangent vector at p of length d(p,q) pointing at q.
HTangent log_map(const HPoint& p, const HPoint& q);

/// w + <w,p> p
HTangent project_tangent(const HPoint& p, const Vec4& w);

/// Point at fraction `lambda` along the geodesic from p to q.
HPoint geodesic_point(const HPoint& p, const HPoint& q, double lambda);

/// Orthonormal basis of the tangent space at p. The basis is the image of the
/// coordinate axes under the pure translation carrying the origin to p.
std::array<Vec4, 3> tangent_frame(const HPoint& p) noexcept;

Vec3 to_klein(const HPoint& p) noexcept;
HPoint from_klein(const Vec3& u);
Vec3 to_poincare(const HPoint& p) noexcept;
HPoint from_poincare(const Vec3& u);

/// A Lorentz transformation preserving the upper sheet.
class Isometry {
 public:
  Isometry() : m_(Mat4::Identity()) {}

  /// The pure translation (boost) carrying the origin to `c`.
  static Isometry translation_to(const HPoint& c);
  /// Rotation about the origin by the given orthogonal 3x3 matrix.
  static Isometry rotation(const Eigen::Matrix3d& r);
  /// Translation by distance `t` along the unit spatial direction `dir`.
  static Isometry boost(const Vec3& dir, double t);

  HPoint apply(const HPoint& p) const { return HPoint::project(m_ * p.coords()); }
  Vec4 apply(const Vec4& v) const { return m_ * v; }
  Isometry inverse() const;
  Isometry operator*(const Isometry& o) const { return Isometry(m_ * o.m_); }
  const Mat4& matrix() const noexcept { return m_; }

 private:
  explicit Isometry(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

}  // namespace hmcf
