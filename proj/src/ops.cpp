#include "hmcf/ops.hpp"

#include "hmcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hmcf {

const char* to_string(Metric m) noexcept {
  return m == Metric::hyperbolic ? "poincare_hyperbolic" : "euclidean_ball";
}

namespace {

constexpr double kDegenerateRatio = 1e-12;
constexpr double kFdRelStep = 1e-5;

// Determinant-style cross product: c . x = det[x; a; b; c] for all x.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    Eigen::Matrix3d m;
    int r = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      m(0, r) = a[j];
      m(1, r) = b[j];
      m(2, r) = c[j];
      ++r;
    }
    out[i] = ((i % 2) ? -1.0 : 1.0) * m.determinant();
  }
  return out;
}

// Geometry policy for the hyperboloid.
struct Hyperbolic {
  using P = Vec4;
  static constexpr double kappa = -1.0;

  static double inner(const P& u, const P& v) { return minkowski_inner(u, v); }

  // Tangent at p pointing to q, with <u,u> = cosh^2 d - 1.
  static P chord_tangent(const P& p, const P& q) {
    const P d = q - p;
    return d + minkowski_inner(d, p) * p;
  }

  static double gram(const P& u, const P& w) {
    const double uw = minkowski_inner(u, w);
    return std::max(0.0, minkowski_inner(u, u) * minkowski_inner(w, w) - uw * uw);
  }

  static double area(const P& a, const P& b, const P& c) {
    const double G = gram(chord_tangent(a, b), chord_tangent(a, c));
    const double s = 1.0 - minkowski_inner(a, b) - minkowski_inner(b, c) - minkowski_inner(a, c);
    return 2.0 * std::atan2(std::sqrt(G), s);
  }

  static double length(const P& a, const P& b) {
    return hdist(HPoint::unchecked(a), HPoint::unchecked(b));
  }

  static double angle(const P& p, const P& q, const P& r) {
    const P u = chord_tangent(p, q), w = chord_tangent(p, r);
    return std::atan2(std::sqrt(gram(u, w)), minkowski_inner(u, w));
  }

  static std::array<P, 3> frame(const P& p) { return tangent_frame(HPoint::unchecked(p)); }

  static P move(const P& p, const P& dir, double h) {
    return exp_map(HPoint::unchecked(p), h * dir).coords();
  }

  // Unit normal of the plane through a, b, c, outward for a face ordered
  // counterclockwise from outside.
  static P unit_normal(const P& a, const P& b, const P& c) {
    const Vec4 k = cross4(a, b, c);
    const P n(k[0], -k[1], -k[2], -k[3]);
    const double len = minkowski_norm(n);
    return len > 0.0 ? P(n / len) : P::Zero();
  }

  static P tangent(const P& p, const P& w) { return w + minkowski_inner(w, p) * p; }
  static double norm(const P& v) { return minkowski_norm(v); }
};

// Flat metric on ball coordinates.
struct Euclidean {
  using P = Vec3;
  static constexpr double kappa = 0.0;

  static double inner(const P& u, const P& v) { return u.dot(v); }
  static double area(const P& a, const P& b, const P& c) { return 0.5 * (b - a).cross(c - a).norm(); }
  static double length(const P& a, const P& b) { return (b - a).norm(); }
  static double angle(const P& p, const P& q, const P& r) {
    const P u = q - p, w = r - p;
    return std::atan2(u.cross(w).norm(), u.dot(w));
  }
  static std::array<P, 3> frame(const P&) { return {P::UnitX(), P::UnitY(), P::UnitZ()}; }
  static P move(const P& p, const P& dir, double h) { return p + h * dir; }
  static P unit_normal(const P& a, const P& b, const P& c) {
    const P n = (b - a).cross(c - a);
    const double len = n.norm();
    return len > 0.0 ? P(n / len) : P::Zero();
  }
  static P tangent(const P&, const P& w) { return w; }
  static double norm(const P& v) { return v.norm(); }
};

template <class S>
FaceGeometry geometry_of(const typename S::P& a, const typename S::P& b, const typename S::P& c) {
  FaceGeometry g;
  g.lengths = {S::length(b, c), S::length(c, a), S::length(a, b)};
  g.angles = {S::angle(a, b, c), S::angle(b, c, a), S::angle(c, a, b)};
  g.area = S::area(a, b, c);
  const double lmax = std::max({g.lengths[0], g.lengths[1], g.lengths[2]});
  g.flagged = !(g.area > kDegenerateRatio * lmax * lmax);
  if (g.flagged) g.area = 0.0;
  return g;
}

// Share of the face that goes to each corner: mixed Voronoi cells of the
// Euclidean triangle with the same side lengths.
std::array<double, 3> voronoi_fractions(const std::array<double, 3>& L) {
  const double l0 = L[0] * L[0], l1 = L[1] * L[1], l2 = L[2] * L[2];
  // 16 A^2 by Heron's formula.
  const double s16 = 2.0 * (l0 * l1 + l1 * l2 + l2 * l0) - (l0 * l0 + l1 * l1 + l2 * l2);
  if (!(s16 > 0.0)) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const double ae = 0.25 * std::sqrt(s16);
  // cot of the angle opposite side i: (sum of the other squares - own) / (4 A)
  const std::array<double, 3> cot = {(l1 + l2 - l0) / (4.0 * ae), (l2 + l0 - l1) / (4.0 * ae),
                                     (l0 + l1 - l2) / (4.0 * ae)};
  for (int i = 0; i < 3; ++i) {
    if (cot[i] < 0.0) {
      std::array<double, 3> f{0.25, 0.25, 0.25};
      f[i] = 0.5;
      return f;
    }
  }
  const std::array<double, 3> sq = {l0, l1, l2};
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    f[i] = (sq[k] * cot[k] + sq[j] * cot[j]) / (8.0 * ae);
  }
  return f;
}

template <class S>
struct Field {
  std::vector<typename S::P> hvec, normal;
  std::vector<double> H, area, defect;
  double total_area = 0.0;
  int flagged = 0;
};

template <class S>
Field<S> compute_field(const std::vector<typename S::P>& x, const Topology& topo, bool with_curvature) {
  using P = typename S::P;
  const auto nv = static_cast<size_t>(topo.num_vertices());
  const auto& faces = topo.faces();
  Field<S> out;
  out.area.assign(nv, 0.0);
  out.defect.assign(nv, 2.0 * std::numbers::pi);
  std::vector<P> nsum(nv, P::Zero());

  for (const Face& f : faces) {
    const FaceGeometry g = geometry_of<S>(x[f[0]], x[f[1]], x[f[2]]);
    if (g.flagged) ++out.flagged;
    out.total_area += g.area;
    const auto frac = voronoi_fractions(g.lengths);
    const P n = S::unit_normal(x[f[0]], x[f[1]], x[f[2]]);
    for (int k = 0; k < 3; ++k) {
      out.area[f[k]] += frac[k] * g.area;
      out.defect[f[k]] -= g.angles[k];
      nsum[f[k]] += g.area * n;
    }
  }
  if (!with_curvature) return out;

  double mean_edge = 0.0;
  for (const Edge& e : topo.edges()) mean_edge += S::length(x[e.a], x[e.b]);
  mean_edge /= std::max<size_t>(1, topo.edges().size());
  const double h = kFdRelStep * mean_edge;

  out.hvec.assign(nv, P::Zero());
  out.normal.assign(nv, P::Zero());
  out.H.assign(nv, 0.0);
  for (size_t v = 0; v < nv; ++v) {
    const P& p = x[v];
    const auto inc = topo.vertex_faces(static_cast<int32_t>(v));
    auto star_area = [&](const P& q) {
      double a = 0.0;
      for (int32_t fi : inc) {
        const Face& f = faces[fi];
        const P& a0 = f[0] == static_cast<int32_t>(v) ? q : x[f[0]];
        const P& a1 = f[1] == static_cast<int32_t>(v) ? q : x[f[1]];
        const P& a2 = f[2] == static_cast<int32_t>(v) ? q : x[f[2]];
        a += S::area(a0, a1, a2);
      }
      return a;
    };
    const auto fr = S::frame(p);
    P grad = P::Zero();
    for (int k = 0; k < 3; ++k) {
      const double g = (star_area(S::move(p, fr[k], h)) - star_area(S::move(p, fr[k], -h))) / (2.0 * h);
      grad += g * fr[k];
    }
    if (!grad.allFinite() || !(out.area[v] > 0.0))
      throw NumericalError("curvature_field: area gradient at vertex " + std::to_string(v) + " is not finite");
    out.hvec[v] = grad / (2.0 * out.area[v]);
    const P t = S::tangent(p, nsum[v]);
    const double tn = S::norm(t);
    out.normal[v] = tn > 0.0 ? P(t / tn) : P::Zero();
    out.H[v] = S::inner(out.hvec[v], out.normal[v]);
  }
  return out;
}

std::vector<Vec4> hyperboloid_coords(const TriMesh& mesh) {
  std::vector<Vec4> x;
  x.reserve(mesh.vertices().size());
  for (const HPoint& p : mesh.vertices()) x.push_back(p.coords());
  return x;
}

std::vector<Vec3> ball_coords(const TriMesh& mesh) {
  std::vector<Vec3> x;
  x.reserve(mesh.vertices().size());
  for (const HPoint& p : mesh.vertices()) x.push_back(to_poincare(p));
  return x;
}

struct MetricField {
  std::vector<double> H, area, defect;
  double kappa;
};

MetricField field_in(const TriMesh& mesh, Metric metric, bool with_curvature) {
  if (metric == Metric::hyperbolic) {
    auto f = compute_field<Hyperbolic>(hyperboloid_coords(mesh), mesh.topology(), with_curvature);
    return {std::move(f.H), std::move(f.area), std::move(f.defect), Hyperbolic::kappa};
  }
  auto f = compute_field<Euclidean>(ball_coords(mesh), mesh.topology(), with_curvature);
  return {std::move(f.H), std::move(f.area), std::move(f.defect), Euclidean::kappa};
}

}  // namespace

FaceGeometry face_geometry(const HPoint& a, const HPoint& b, const HPoint& c) {
  return geometry_of<Hyperbolic>(a.coords(), b.coords(), c.coords());
}

double face_area(const TriMesh& mesh, int32_t f) {
  const Face& x = mesh.faces()[f];
  return face_geometry(mesh.vertex(x[0]), mesh.vertex(x[1]), mesh.vertex(x[2])).area;
}

double total_area(const TriMesh& mesh) {
  double a = 0.0;
  for (int32_t f = 0; f < mesh.num_faces(); ++f) a += face_area(mesh, f);
  return a;
}

int flagged_face_count(const TriMesh& mesh) {
  int n = 0;
  for (const Face& x : mesh.faces())
    n += face_geometry(mesh.vertex(x[0]), mesh.vertex(x[1]), mesh.vertex(x[2])).flagged ? 1 : 0;
  return n;
}

Vec4 face_normal(const TriMesh& mesh, int32_t f) {
  const Face& x = mesh.faces()[f];
  return Hyperbolic::unit_normal(mesh.vertex(x[0]).coords(), mesh.vertex(x[1]).coords(), mesh.vertex(x[2]).coords());
}

EdgeStats edge_stats(const TriMesh& mesh) {
  EdgeStats s;
  if (mesh.edges().empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  for (const Edge& e : mesh.edges()) {
    const double l = hdist(mesh.vertex(e.a), mesh.vertex(e.b));
    s.min = std::min(s.min, l);
    s.max = std::max(s.max, l);
    s.mean += l;
  }
  s.mean /= static_cast<double>(mesh.edges().size());
  return s;
}

double max_incident_edge(const TriMesh& mesh, int32_t v) {
  double m = 0.0;
  for (int32_t u : mesh.topology().vertex_neighbors(v)) m = std::max(m, hdist(mesh.vertex(v), mesh.vertex(u)));
  return m;
}

CurvatureField curvature_field(const TriMesh& mesh) {
  auto f = compute_field<Hyperbolic>(hyperboloid_coords(mesh), mesh.topology(), true);
  CurvatureField cf;
  cf.hvec = std::move(f.hvec);
  cf.H = std::move(f.H);
  cf.normal = std::move(f.normal);
  cf.area = std::move(f.area);
  cf.total_area = f.total_area;
  cf.flagged = f.flagged;
  return cf;
}

double willmore_euclidean_style(const CurvatureField& cf) {
  double w = 0.0;
  for (size_t v = 0; v < cf.size(); ++v) w += cf.H[v] * cf.H[v] * cf.area[v];
  return w;
}

double willmore_hyperbolic(const CurvatureField& cf) {
  double w = 0.0;
  for (size_t v = 0; v < cf.size(); ++v) w += (cf.H[v] * cf.H[v] - 1.0) * cf.area[v];
  return w;
}

double mean_curvature_integral(const CurvatureField& cf) {
  double s = 0.0;
  for (size_t v = 0; v < cf.size(); ++v) s += cf.H[v] * cf.area[v];
  return s;
}

double willmore_euclidean_style(const TriMesh& mesh) { return willmore_euclidean_style(curvature_field(mesh)); }
double willmore_hyperbolic(const TriMesh& mesh) { return willmore_hyperbolic(curvature_field(mesh)); }

std::vector<double> angle_defects(const TriMesh& mesh, Metric metric) {
  return field_in(mesh, metric, false).defect;
}

std::vector<double> gauss_curvature_intrinsic(const TriMesh& mesh, Metric metric) {
  const MetricField f = field_in(mesh, metric, false);
  std::vector<double> k(f.defect.size());
  for (size_t v = 0; v < k.size(); ++v) k[v] = f.defect[v] / f.area[v] + f.kappa;
  return k;
}

double conformal_energy(const TriMesh& mesh, Metric metric) {
  const MetricField f = field_in(mesh, metric, true);
  double e = 0.0;
  for (size_t v = 0; v < f.H.size(); ++v) {
    const double k = f.defect[v] / f.area[v] + f.kappa;
    e += (f.H[v] * f.H[v] + k + f.kappa) * f.area[v];
  }
  return e;
}

namespace {

// Vertex coordinates split by component so the pair loops vectorize.
struct CoordColumns {
  std::vector<double> x0, x1, x2, x3;
  explicit CoordColumns(const TriMesh& m) {
    const size_t n = m.vertices().size();
    x0.resize(n);
    x1.resize(n);
    x2.resize(n);
    x3.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const Vec4& p = m.vertices()[i].coords();
      x0[i] = p[0];
      x1[i] = p[1];
      x2[i] = p[2];
      x3[i] = p[3];
    }
  }
  size_t size() const { return x0.size(); }
  // -<p_i, q_j>, which is cosh of the distance
  double cosh_dist(size_t i, const CoordColumns& o, size_t j) const {
    return x0[i] * o.x0[j] - x1[i] * o.x1[j] - x2[i] * o.x2[j] - x3[i] * o.x3[j];
  }
};

}  // namespace

double diameter(const TriMesh& mesh) {
  const CoordColumns c(mesh);
  const size_t n = c.size();
  // Track the pair with the largest -<p,q>, then evaluate the distance once.
  double best = 1.0;
  size_t bi = 0, bj = 0;
  for (size_t i = 0; i < n; ++i) {
    double row = 1.0;
    size_t rj = i;
    for (size_t j = i + 1; j < n; ++j) {
      const double v = c.cosh_dist(i, c, j);
      if (v > row) {
        row = v;
        rj = j;
      }
    }
    if (row > best) {
      best = row;
      bi = i;
      bj = rj;
    }
  }
  return n < 2 ? 0.0 : hdist(mesh.vertex(static_cast<int32_t>(bi)), mesh.vertex(static_cast<int32_t>(bj)));
}

double max_distance(const TriMesh& a, const TriMesh& b) {
  if (a.vertices().empty() || b.vertices().empty()) throw DomainError("max_distance: empty mesh");
  const CoordColumns ca(a), cb(b);
  double best = 1.0;
  size_t bi = 0, bj = 0;
  for (size_t i = 0; i < ca.size(); ++i) {
    double row = 1.0;
    size_t rj = 0;
    for (size_t j = 0; j < cb.size(); ++j) {
      const double v = ca.cosh_dist(i, cb, j);
      if (v > row) {
        row = v;
        rj = j;
      }
    }
    if (row > best) {
      best = row;
      bi = i;
      bj = rj;
    }
  }
  return hdist(a.vertex(static_cast<int32_t>(bi)), b.vertex(static_cast<int32_t>(bj)));
}

double surface_distance(const TriMesh& a, const TriMesh& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  if (va.empty() || vb.empty()) throw DomainError("surface_distance: empty mesh");
  const CoordColumns ca(a), cb(b);
  double best = std::numeric_limits<double>::infinity();
  int32_t bi = 0, bj = 0;
  for (size_t i = 0; i < ca.size(); ++i) {
    double row = std::numeric_limits<double>::infinity();
    size_t rj = 0;
    for (size_t j = 0; j < cb.size(); ++j) {
      const double c = ca.cosh_dist(i, cb, j);
      if (c < row) {
        row = c;
        rj = j;
      }
    }
    if (row < best) {
      best = row;
      bi = static_cast<int32_t>(i);
      bj = static_cast<int32_t>(rj);
    }
  }
  double d = hdist(va[bi], vb[bj]);

  auto samples = [](const TriMesh& m, int32_t v) {
    std::vector<HPoint> s;
    for (int32_t fi : m.topology().vertex_faces(v)) {
      const Face& f = m.faces()[fi];
      const HPoint &p = m.vertex(f[0]), &q = m.vertex(f[1]), &r = m.vertex(f[2]);
      s.push_back(p);
      s.push_back(q);
      s.push_back(r);
      s.push_back(HPoint::project(p.coords() + q.coords()));
      s.push_back(HPoint::project(q.coords() + r.coords()));
      s.push_back(HPoint::project(r.coords() + p.coords()));
      s.push_back(HPoint::project(p.coords() + q.coords() + r.coords()));
    }
    return s;
  };
  const auto sa = samples(a, bi);
  const auto sb = samples(b, bj);
  for (const HPoint& p : sa)
    for (const HPoint& q : sb) d = std::min(d, hdist(p, q));
  return d;
}

}  // namespace hmcf
