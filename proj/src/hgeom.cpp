#include "hmcf/hgeom.hpp"

#include "hmcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmcf {

namespace {

constexpr double kClampBand = 1e-9;
constexpr double kBallEdge = 1e-12;

std::string coords_str(const Vec4& x) {
  return "(" + std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) +
         ", " + std::to_string(x[3]) + ")";
}

}  // namespace

double minkowski_norm(const Vec4& v) noexcept {
  const double n2 = minkowski_inner(v, v);
  return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

HPoint HPoint::from_coords(const Vec4& x, double tol) {
  if (!x.allFinite()) throw DomainError("HPoint: non-finite coordinates " + coords_str(x));
  if (std::abs(minkowski_inner(x, x) + 1.0) > tol || x[0] < 1.0 - tol)
    throw DomainError("HPoint: " + coords_str(x) + " is not on the upper hyperboloid sheet");
  return HPoint(x);
}

HPoint HPoint::project(const Vec4& x) {
  const double q = -minkowski_inner(x, x);
  if (!(q > 0.0) || !(x[0] > 0.0))
    throw DomainError("HPoint: cannot project non-timelike vector " + coords_str(x));
  return HPoint(x / std::sqrt(q));
}

double HPoint::constraint_violation() const noexcept {
  return std::abs(minkowski_inner(x_, x_) + 1.0);
}

double cosh_dist(const HPoint& p, const HPoint& q) noexcept {
  return std::max(1.0, -minkowski_inner(p.coords(), q.coords()));
}

double hdist(const HPoint& p, const HPoint& q) {
  const double c = -minkowski_inner(p.coords(), q.coords());
  if (c < 1.0 - kClampBand)
    throw DomainError("hdist: -<p,q> = " + std::to_string(c) + " is below 1");
  if (c < 2.0) {
    // Chord form 2 asinh(|p-q|/2) keeps full relative precision for close points.
    const Vec4 diff = p.coords() - q.coords();
    return 2.0 * std::asinh(0.5 * minkowski_norm(diff));
  }
  return std::acosh(c);
}

HPoint exp_map(const HPoint& p, const Vec4& v) {
  const double n = minkowski_norm(v);
  if (n < 1e-14) return p;
  const Vec4 x = std::cosh(n) * p.coords() + (std::sinh(n) / n) * v;
  return HPoint::project(x);
}

HTangent log_map(const HPoint& p, const HPoint& q) {
  const Vec4 u = q.coords() - p.coords();
  Vec4 v = u + minkowski_inner(u, p.coords()) * p.coords();
  const double n = minkowski_norm(v);
  if (n < 1e-300) return HTangent{p, Vec4::Zero()};
  v *= hdist(p, q) / n;
  return HTangent{p, v};
}

HTangent project_tangent(const HPoint& p, const Vec4& w) {
  return HTangent{p, w + minkowski_inner(w, p.coords()) * p.coords()};
}

HPoint geodesic_point(const HPoint& p, const HPoint& q, double lambda) {
  const HTangent v = log_map(p, q);
  return exp_map(p, lambda * v.v);
}

std::array<Vec4, 3> tangent_frame(const HPoint& p) noexcept {
  const Vec4& x = p.coords();
  const double k = 1.0 / (1.0 + x[0]);
  std::array<Vec4, 3> frame;
  for (int j = 0; j < 3; ++j) {
    Vec4 e;
    e[0] = x[j + 1];
    for (int i = 0; i < 3; ++i) e[i + 1] = (i == j ? 1.0 : 0.0) + k * x[i + 1] * x[j + 1];
    frame[j] = e;
  }
  return frame;
}

Vec3 to_klein(const HPoint& p) noexcept {
  const Vec4& x = p.coords();
  return Vec3(x[1], x[2], x[3]) / x[0];
}

HPoint from_klein(const Vec3& u) {
  const double r2 = u.squaredNorm();
  if (!(std::sqrt(r2) < 1.0 - kBallEdge)) throw DomainError("from_klein: point outside the open unit ball");
  const double x0 = 1.0 / std::sqrt(1.0 - r2);
  return HPoint::unchecked(Vec4(x0, x0 * u[0], x0 * u[1], x0 * u[2]));
}

Vec3 to_poincare(const HPoint& p) noexcept {
  const Vec4& x = p.coords();
  return Vec3(x[1], x[2], x[3]) / (1.0 + x[0]);
}

HPoint from_poincare(const Vec3& u) {
  const double r2 = u.squaredNorm();
  if (!(std::sqrt(r2) < 1.0 - kBallEdge)) throw DomainError("from_poincare: point outside the open unit ball");
  const double s = 1.0 / (1.0 - r2);
  return HPoint::unchecked(Vec4((1.0 + r2) * s, 2.0 * s * u[0], 2.0 * s * u[1], 2.0 * s * u[2]));
}

Isometry Isometry::translation_to(const HPoint& c) {
  const Vec4& x = c.coords();
  const double k = 1.0 / (1.0 + x[0]);
  Mat4 m;
  m(0, 0) = x[0];
  for (int i = 0; i < 3; ++i) {
    m(0, i + 1) = x[i + 1];
    m(i + 1, 0) = x[i + 1];
    for (int j = 0; j < 3; ++j) m(i + 1, j + 1) = (i == j ? 1.0 : 0.0) + k * x[i + 1] * x[j + 1];
  }
  return Isometry(m);
}

Isometry Isometry::rotation(const Eigen::Matrix3d& r) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(1, 1) = r;
  return Isometry(m);
}

Isometry Isometry::boost(const Vec3& dir, double t) {
  const Vec3 n = dir.normalized();
  const Vec4 c(std::cosh(t), std::sinh(t) * n[0], std::sinh(t) * n[1], std::sinh(t) * n[2]);
  return translation_to(HPoint::unchecked(c));
}

Isometry Isometry::inverse() const {
  // Lorentz matrices satisfy L^{-1} = eta L^T eta.
  const Eigen::Vector4d eta(-1.0, 1.0, 1.0, 1.0);
  return Isometry(eta.asDiagonal() * m_.transpose() * eta.asDiagonal());
}

}  // namespace hmcf
