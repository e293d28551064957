#include "hmcf/shapes.hpp"

#include "hmcf/analytic.hpp"
#include "hmcf/errors.hpp"
#include "hmcf/ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace hmcf {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(ShapeKind k) noexcept {
  switch (k) {
    case ShapeKind::geodesic_sphere: return "geodesic_sphere";
    case ShapeKind::drilled_sphere_torus: return "drilled_sphere_torus";
    case ShapeKind::dumbbell: return "dumbbell";
    case ShapeKind::ellipsoidal: return "ellipsoidal";
  }
  return "unknown";
}

ShapeKind parse_shape_kind(const std::string& s) {
  if (s == "sphere" || s == "geodesic_sphere") return ShapeKind::geodesic_sphere;
  if (s == "torus" || s == "drilled_sphere_torus") return ShapeKind::drilled_sphere_torus;
  if (s == "dumbbell") return ShapeKind::dumbbell;
  if (s == "ellipsoid" || s == "ellipsoidal") return ShapeKind::ellipsoidal;
  throw DomainError("unknown shape kind '" + s + "'");
}

void ShapeSpec::check() const {
  if (resolution < 12) throw DomainError("resolution must be at least 12 vertices");
  switch (kind) {
    case ShapeKind::geodesic_sphere:
      if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
      break;
    case ShapeKind::ellipsoidal:
      if (!(r > 0.0)) throw DomainError("ellipsoid radius must be positive");
      if (!(stretch >= 1.0 && stretch <= 3.0)) throw DomainError("stretch must lie in [1, 3]");
      break;
    case ShapeKind::drilled_sphere_torus:
      if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
      break;
    case ShapeKind::dumbbell:
      if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
      if (!(d > 2.0 + 4.0 * epsilon)) throw DomainError("dumbbell needs d > 2 + 4 epsilon");
      break;
  }
}

HPoint fermi_point(double s, double rho, double theta) {
  const double cr = std::cosh(rho), sr = std::sinh(rho);
  return HPoint::project(Vec4(cr * std::cosh(s), cr * std::sinh(s), sr * std::cos(theta), sr * std::sin(theta)));
}

// Icosphere

void unit_icosphere(int level, std::vector<Vec3>& dirs, std::vector<Face>& faces) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  dirs = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
          {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : dirs) v.normalize();
  faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
           {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
           {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int32_t, int32_t>, int32_t> mid;
    auto midpoint = [&](int32_t a, int32_t b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      dirs.push_back((dirs[a] + dirs[b]).normalized());
      const auto idx = static_cast<int32_t>(dirs.size() - 1);
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(4 * faces.size());
    for (const Face& f : faces) {
      const int32_t a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
}

int icosphere_level(int resolution) {
  if (resolution < 12) throw DomainError("resolution must be at least 12 vertices");
  int level = 0;
  long long n = 12;
  while (n < resolution) {
    ++level;
    n = 10LL * (1LL << (2 * level)) + 2;
  }
  return level;
}

namespace {

TriMesh radial_mesh(const HPoint& center, int resolution, const std::function<double(const Vec3&)>& radius) {
  std::vector<Vec3> dirs;
  std::vector<Face> faces;
  unit_icosphere(icosphere_level(resolution), dirs, faces);
  const Isometry g = Isometry::translation_to(center);
  std::vector<HPoint> verts;
  verts.reserve(dirs.size());
  for (const Vec3& u : dirs) {
    const double r = radius(u);
    const Vec4 x(std::cosh(r), std::sinh(r) * u[0], std::sinh(r) * u[1], std::sinh(r) * u[2]);
    verts.push_back(g.apply(HPoint::project(x)));
  }
  return TriMesh(std::move(verts), std::move(faces));
}

}  // namespace

TriMesh gen_sphere(double r, const HPoint& center, int resolution) {
  if (!(r > 0.0)) throw DomainError("gen_sphere: radius must be positive");
  return radial_mesh(center, resolution, [r](const Vec3&) { return r; });
}

TriMesh gen_ellipsoidal(double r, double stretch, int resolution, const HPoint& center) {
  if (!(r > 0.0)) throw DomainError("gen_ellipsoidal: radius must be positive");
  if (!(stretch >= 1.0 && stretch <= 3.0)) throw DomainError("gen_ellipsoidal: stretch must lie in [1, 3]");
  return radial_mesh(center, resolution, [r, stretch](const Vec3& u) { return r * (1.0 + (stretch - 1.0) * u[2] * u[2]); });
}

// Surfaces of revolution

namespace {

struct SR {
  double s, rho;
};

using Polyline = std::vector<SR>;

// Point of the unit sphere centred at axial position c, at polar angle phi
// from the +s direction.
SR sphere_arc_point(double c, double phi) {
  const double ch = std::cosh(1.0), sh = std::sinh(1.0);
  const double x0 = ch * std::cosh(c) + sh * std::cos(phi) * std::sinh(c);
  const double x1 = ch * std::sinh(c) + sh * std::cos(phi) * std::cosh(c);
  return {std::atanh(x1 / x0), std::asinh(sh * std::sin(phi))};
}

double plane_len(const SR& a, const SR& b) { return std::hypot(b.s - a.s, b.rho - a.rho); }

// Walks `w` along the polyline from its first point; returns the point and
// the index of the segment it falls in.
std::pair<SR, size_t> walk(const Polyline& p, double w) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    const double l = plane_len(p[i], p[i + 1]);
    if (acc + l >= w) {
      const double f = l > 0.0 ? (w - acc) / l : 0.0;
      return {{p[i].s + f * (p[i + 1].s - p[i].s), p[i].rho + f * (p[i + 1].rho - p[i].rho)}, i};
    }
    acc += l;
  }
  return {p.back(), p.size() - 2};
}

double total_len(const Polyline& p) {
  double l = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) l += plane_len(p[i], p[i + 1]);
  return l;
}

SR unit_dir(const SR& a, const SR& b) {
  const double l = plane_len(a, b);
  return {(b.s - a.s) / l, (b.rho - a.rho) / l};
}

// Joins two polylines meeting at a corner (first.back() == second.front())
// with a cubic Hermite fillet between points at plane arclength w on either side.
Polyline fillet_join(const Polyline& first, const Polyline& second, double w, int fillet_samples) {
  Polyline rev(first.rbegin(), first.rend());
  w = std::min({w, 0.45 * total_len(first), 0.45 * total_len(second)});
  const auto [p1, i1] = walk(rev, w);
  const auto [p2, i2] = walk(second, w);
  // Travel directions at the cut points.
  const SR t1 = unit_dir(rev[i1 + 1], rev[i1]);
  const SR t2 = unit_dir(second[i2], second[i2 + 1]);
  const double m = plane_len(p1, p2);

  Polyline out;
  const size_t keep_first = rev.size() - 1 - (i1 + 1);  // points strictly before p1
  for (size_t i = 0; i <= keep_first; ++i) out.push_back(first[i]);
  for (int k = 0; k <= fillet_samples; ++k) {
    const double u = static_cast<double>(k) / fillet_samples;
    const double h00 = 2 * u * u * u - 3 * u * u + 1, h10 = u * u * u - 2 * u * u + u;
    const double h01 = -2 * u * u * u + 3 * u * u, h11 = u * u * u - u * u;
    out.push_back({h00 * p1.s + h10 * m * t1.s + h01 * p2.s + h11 * m * t2.s,
                   h00 * p1.rho + h10 * m * t1.rho + h01 * p2.rho + h11 * m * t2.rho});
  }
  for (size_t i = i2 + 1; i < second.size(); ++i) out.push_back(second[i]);
  return out;
}

constexpr int kDense = 20000;

// Sphere arc centred at c from polar angle phi0 to phi1.
Polyline arc(double c, double phi0, double phi1) {
  Polyline p;
  for (int k = 0; k <= kDense; ++k) p.push_back(sphere_arc_point(c, phi0 + (phi1 - phi0) * k / kDense));
  return p;
}

Polyline tube(double s0, double s1, double eps) {
  Polyline p;
  for (int k = 0; k <= kDense; ++k) p.push_back({s0 + (s1 - s0) * k / kDense, eps});
  return p;
}

// Half profile and its tube core extent (|s| <= tube_half on rho = eps).
struct HalfProfile {
  Polyline curve;
  double eps;
  double tube_half;
};

HalfProfile dumbbell_half(double d, double eps) {
  const double c = -0.5 * d;
  const double phic = std::asin(std::sinh(eps) / std::sinh(1.0));
  Polyline a = arc(c, kPi, phic);
  a.back() = {c + tube_junction_offset(eps), eps};
  const Polyline t = tube(a.back().s, 0.0, eps);
  HalfProfile h{fillet_join(a, t, 2.0 * eps, 400), eps, 0.0};
  h.curve.front() = {c - 1.0, 0.0};
  h.curve.back() = {0.0, eps};
  h.tube_half = 0.0;
  for (const SR& p : h.curve)
    if (p.rho == eps) h.tube_half = std::max(h.tube_half, std::abs(p.s));
  return h;
}

HalfProfile torus_half(double eps) {
  const double phic = std::asin(std::sinh(eps) / std::sinh(1.0));
  Polyline a = arc(0.0, 0.5 * kPi, phic);
  a.front() = {0.0, 1.0};
  a.back() = {tube_junction_offset(eps), eps};
  const Polyline t = tube(a.back().s, 0.0, eps);
  HalfProfile h{fillet_join(a, t, 2.0 * eps, 400), eps, 0.0};
  h.curve.back() = {0.0, eps};
  for (const SR& p : h.curve)
    if (p.rho == eps) h.tube_half = std::max(h.tube_half, std::abs(p.s));
  return h;
}

// Distance in H^3 from the profile point to the tube core segment.
double tube_distance(const SR& p, const HalfProfile& h) {
  const double s = std::clamp(p.s, -h.tube_half, h.tube_half);
  const double ch = std::cosh(p.rho) * std::cosh(h.eps) * std::cosh(p.s - s) - std::sinh(p.rho) * std::sinh(h.eps);
  return std::acosh(std::max(1.0, ch));
}

std::vector<double> cumulative_cost(const HalfProfile& h, double h_max, double h_tube) {
  const auto& c = h.curve;
  std::vector<double> size(c.size());
  for (size_t i = 0; i < c.size(); ++i) size[i] = std::min(h_max, h_tube + 0.3 * tube_distance(c[i], h));
  std::vector<double> cum(c.size(), 0.0);
  for (size_t i = 1; i < c.size(); ++i) {
    const double rho = 0.5 * (c[i].rho + c[i - 1].rho);
    const double ds = c[i].s - c[i - 1].s, dr = c[i].rho - c[i - 1].rho;
    const double dl = std::sqrt(std::cosh(rho) * std::cosh(rho) * ds * ds + dr * dr);
    cum[i] = cum[i - 1] + dl * 2.0 / (size[i] + size[i - 1]);
  }
  return cum;
}

Polyline resample(const HalfProfile& h, double h_max, double h_tube) {
  const auto cum = cumulative_cost(h, h_max, h_tube);
  const auto n = static_cast<int>(std::max(1.0, std::ceil(cum.back())));
  Polyline out{h.curve.front()};
  size_t j = 0;
  for (int k = 1; k < n; ++k) {
    const double target = cum.back() * k / n;
    while (cum[j + 1] < target) ++j;
    const double f = (target - cum[j]) / (cum[j + 1] - cum[j]);
    out.push_back({h.curve[j].s + f * (h.curve[j + 1].s - h.curve[j].s),
                   h.curve[j].rho + f * (h.curve[j + 1].rho - h.curve[j].rho)});
  }
  out.push_back(h.curve.back());
  return out;
}

// Ring sizes: 1 on the axis, otherwise at least 6.
std::vector<int> ring_counts(const Polyline& rings, const HalfProfile& h, double h_max, double h_tube) {
  std::vector<int> n;
  for (const SR& p : rings) {
    if (p.rho <= 0.0) {
      n.push_back(1);
      continue;
    }
    const double sz = std::min(h_max, h_tube + 0.3 * tube_distance(p, h));
    n.push_back(std::max(6, static_cast<int>(std::lround(2.0 * kPi * std::sinh(p.rho) / sz))));
  }
  return n;
}

Polyline full_profile(const Polyline& half, bool closed) {
  Polyline full = half;
  const size_t stop = closed ? 1 : 0;
  for (size_t i = half.size() - 1; i-- > stop;) full.push_back({-half[i].s, half[i].rho});
  return full;
}

void zipper(const std::vector<int32_t>& a, double pa, const std::vector<int32_t>& b, double pb, std::vector<Face>& out) {
  const auto na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  if (na == 1) {
    for (int j = 0; j < nb; ++j) out.push_back({a[0], b[(j + 1) % nb], b[j]});
    return;
  }
  if (nb == 1) {
    for (int i = 0; i < na; ++i) out.push_back({a[i], a[(i + 1) % na], b[0]});
    return;
  }
  int i = 0, j = 0;
  while (i < na || j < nb) {
    const double ta = (i + 1 + pa) / na, tb = (j + 1 + pb) / nb;
    if (j == nb || (i < na && ta <= tb)) {
      out.push_back({a[i % na], a[(i + 1) % na], b[j % nb]});
      ++i;
    } else {
      out.push_back({a[i % na], b[(j + 1) % nb], b[j % nb]});
      ++j;
    }
  }
}

TriMesh revolve(const Polyline& rings, const std::vector<int>& counts, bool closed) {
  std::vector<HPoint> verts;
  std::vector<std::vector<int32_t>> ids(rings.size());
  std::vector<double> phase(rings.size());
  for (size_t i = 0; i < rings.size(); ++i) {
    phase[i] = counts[i] == 1 ? 0.0 : 0.5 * static_cast<double>(i % 2);
    for (int k = 0; k < counts[i]; ++k) {
      ids[i].push_back(static_cast<int32_t>(verts.size()));
      const double theta = 2.0 * kPi * (k + phase[i]) / counts[i];
      verts.push_back(fermi_point(rings[i].s, counts[i] == 1 ? 0.0 : rings[i].rho, theta));
    }
  }
  std::vector<Face> faces;
  const size_t bands = closed ? rings.size() : rings.size() - 1;
  for (size_t i = 0; i < bands; ++i) {
    const size_t j = (i + 1) % rings.size();
    zipper(ids[i], phase[i], ids[j], phase[j], faces);
  }
  TriMesh m(std::move(verts), std::move(faces));
  if (enclosed_volume(m) < 0.0) m = m.reversed();
  return m;
}

long long vertex_total(const std::vector<int>& counts) {
  long long n = 0;
  for (int c : counts) n += c;
  return n;
}

// Largest spacing whose mesh reaches the target vertex count.
TriMesh revolve_to_resolution(const HalfProfile& half, bool closed, int resolution) {
  const double h_circ = 2.0 * kPi * std::sinh(half.eps) / 16.0;
  auto build = [&](double h_max, Polyline* rings_out, std::vector<int>* counts_out) {
    const double h_tube = std::min(h_max, h_circ);
    const Polyline rings = full_profile(resample(half, h_max, h_tube), closed);
    auto counts = ring_counts(rings, half, h_max, h_tube);
    const long long n = vertex_total(counts);
    if (rings_out) *rings_out = rings;
    if (counts_out) *counts_out = std::move(counts);
    return n;
  };
  double hi = 1.0;
  if (build(hi, nullptr, nullptr) > resolution)
    throw DomainError("resolution " + std::to_string(resolution) +
                      " is insufficient to resolve the tube with 16 vertices around it");
  double lo = hi;
  while (build(lo, nullptr, nullptr) < resolution) {
    lo *= 0.5;
    if (lo < 1e-6) throw DomainError("resolution target unreachable");
  }
  if (lo < hi) {
    double up = 2.0 * lo;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + up);
      if (build(mid, nullptr, nullptr) >= resolution) lo = mid;
      else up = mid;
    }
  }
  Polyline rings;
  std::vector<int> counts;
  build(lo, &rings, &counts);
  return revolve(rings, counts, closed);
}

}  // namespace

double tube_junction_offset(double eps) { return std::acosh(std::cosh(1.0) / std::cosh(eps)); }

double dumbbell_tube_area(double d, double eps) {
  const double len = d - 2.0 * tube_junction_offset(eps);
  return 2.0 * kPi * std::sinh(eps) * std::cosh(eps) * len;
}

double dumbbell_reference_area(double d, double eps) {
  return 2.0 * analytic::sphere_area(1.0) + dumbbell_tube_area(d, eps);
}

TriMesh gen_drilled_torus(double epsilon, int resolution) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("gen_drilled_torus: epsilon must lie in (0, 0.5)");
  return revolve_to_resolution(torus_half(epsilon), true, resolution);
}

TriMesh gen_dumbbell(double d, double epsilon, int resolution) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("gen_dumbbell: epsilon must lie in (0, 0.5)");
  if (!(d > 2.0 + 4.0 * epsilon)) throw DomainError("gen_dumbbell: need d > 2 + 4 epsilon");
  return revolve_to_resolution(dumbbell_half(d, epsilon), false, resolution);
}

TriMesh generate(const ShapeSpec& spec) {
  spec.check();
  const HPoint center = exp_map(HPoint::origin(), Vec4(0.0, spec.center[0], spec.center[1], spec.center[2]));
  switch (spec.kind) {
    case ShapeKind::geodesic_sphere: return gen_sphere(spec.r, center, spec.resolution);
    case ShapeKind::ellipsoidal: return gen_ellipsoidal(spec.r, spec.stretch, spec.resolution, center);
    case ShapeKind::drilled_sphere_torus: return gen_drilled_torus(spec.epsilon, spec.resolution);
    case ShapeKind::dumbbell: return gen_dumbbell(spec.d, spec.epsilon, spec.resolution);
  }
  throw DomainError("unknown shape kind");
}

std::optional<Axis> shape_axis(const ShapeSpec& spec) {
  if (spec.kind != ShapeKind::dumbbell) return std::nullopt;
  return Axis{fermi_point(-0.5 * spec.d, 0.0, 0.0), fermi_point(0.5 * spec.d, 0.0, 0.0)};
}

}  // namespace hmcf
