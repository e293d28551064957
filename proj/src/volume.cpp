// Enclosed volume and winding number, both evaluated in the Klein chart where
// geodesic triangles are flat.

#include "hmcf/errors.hpp"
#include "hmcf/ops.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <vector>

namespace hmcf {

namespace {

// Integral over t in [0,1] of t^2 (1 - t^2 R^2)^{-2}: the hyperbolic volume
// density integrated along a ray from the origin, per unit solid cone.
double radial_integral(double R) {
  if (R < 0.3) {
    const double r2 = R * R;
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 40; ++k) {
      sum += (k + 1) * term / (2 * k + 3);
      term *= r2;
      if (term < 1e-18) break;
    }
    return sum;
  }
  const double r2 = R * R;
  return 1.0 / (2.0 * r2 * (1.0 - r2)) - std::atanh(R) / (2.0 * r2 * R);
}

struct TriRule {
  std::vector<double> s, w, weight;  // barycentric offsets along (b-a), (c-a)
};

// Collapsed Gauss-Legendre product rule on the reference triangle.
template <unsigned N>
TriRule collapsed_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  std::vector<double> x, wx;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  for (size_t i = 0; i < ab.size(); ++i) {
    // [-1,1] -> [0,1]
    x.push_back(0.5 * (1.0 + ab[i]));
    wx.push_back(0.5 * wt[i]);
    if (ab[i] != 0.0) {
      x.push_back(0.5 * (1.0 - ab[i]));
      wx.push_back(0.5 * wt[i]);
    }
  }
  TriRule r;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) {
      r.s.push_back(x[i]);
      r.w.push_back((1.0 - x[i]) * x[j]);
      r.weight.push_back(wx[i] * wx[j] * (1.0 - x[i]));
    }
  return r;
}

const TriRule& rule3() {
  static const TriRule r = collapsed_rule<3>();
  return r;
}
const TriRule& rule4() {
  static const TriRule r = collapsed_rule<4>();
  return r;
}

double integrate(const TriRule& r, const Vec3& a, const Vec3& b, const Vec3& c) {
  double s = 0.0;
  for (size_t i = 0; i < r.s.size(); ++i) {
    const Vec3 y = a + r.s[i] * (b - a) + r.w[i] * (c - a);
    s += r.weight[i] * radial_integral(y.norm());
  }
  return s;
}

constexpr double kQuadTol = 1e-8;

// Volume of the cone from the Klein origin over the flat triangle abc.
double cone_volume(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double det = a.dot(b.cross(c));
  const double q4 = integrate(rule4(), a, b, c);
  const double q3 = integrate(rule3(), a, b, c);
  if (std::abs(det) * std::abs(q4 - q3) <= kQuadTol) return det * q4;
  const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  // Each child has a quarter of the parameter area.
  const double sub = integrate(rule4(), a, ab, ca) + integrate(rule4(), ab, b, bc) + integrate(rule4(), ca, bc, c) +
                     integrate(rule4(), bc, ca, ab);
  return det * 0.25 * sub;
}

// Boost sending the normalized Minkowski mean of the vertices to the origin,
// which keeps the Klein images away from the unit sphere.
Isometry recentering(const TriMesh& mesh) {
  Vec4 m = Vec4::Zero();
  for (const HPoint& p : mesh.vertices()) m += p.coords();
  if (!(-minkowski_inner(m, m) > 0.0)) return Isometry();
  return Isometry::translation_to(HPoint::project(m)).inverse();
}

std::vector<Vec3> klein_images(const TriMesh& mesh, const Isometry& g) {
  std::vector<Vec3> u;
  u.reserve(mesh.vertices().size());
  for (const HPoint& p : mesh.vertices()) {
    const Vec3 k = to_klein(g.apply(p));
    if (!(k.norm() < 1.0 - 1e-9)) throw NumericalError("enclosed_volume: vertex too close to the ideal boundary");
    u.push_back(k);
  }
  return u;
}

}  // namespace

double enclosed_volume(const TriMesh& mesh) {
  if (mesh.num_faces() == 0) return 0.0;
  const auto u = klein_images(mesh, recentering(mesh));
  double v = 0.0;
  for (const Face& f : mesh.faces()) v += cone_volume(u[f[0]], u[f[1]], u[f[2]]);
  return v;
}

double winding_number(const TriMesh& mesh, const HPoint& q) {
  const Isometry g = Isometry::translation_to(q).inverse();
  const auto u = klein_images(mesh, g);
  // q sits at the Klein origin; the Klein map keeps the surface's topology.
  double omega = 0.0;
  for (const Face& f : mesh.faces()) {
    const Vec3 &a = u[f[0]], &b = u[f[1]], &c = u[f[2]];
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    omega += 2.0 * std::atan2(num, den);
  }
  return omega / (4.0 * std::numbers::pi);
}

}  // namespace hmcf
