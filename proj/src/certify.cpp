#include "hmcf/certify.hpp"

#include "hmcf/analytic.hpp"
#include "hmcf/digest.hpp"
#include "hmcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hmcf {

namespace {

constexpr double kPi = std::numbers::pi;

// pass iff margin >= -tolerance, inconclusive when faces are flagged
Verdict two_sided(double margin, double tol, int flagged) {
  if (flagged > 0) return Verdict::inconclusive;
  return margin >= -tol ? Verdict::pass : Verdict::fail;
}

// Sufficient-condition certificates: a pass certifies, a fail certifies nothing.
Verdict one_directional(double margin, double tol, int flagged) {
  if (flagged > 0) return Verdict::inconclusive;
  if (margin > tol) return Verdict::pass;
  if (std::abs(margin) <= tol) return Verdict::inconclusive;
  return Verdict::fail;
}

Certificate make(std::string name, double lhs, double rhs, std::string rel, double margin, double tol,
                 const MeshEvaluation* ev) {
  Certificate c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = std::move(rel);
  c.margin = margin;
  c.tolerance = tol;
  if (ev) {
    c.inputs_digest = ev->digest();
    c.verdict = two_sided(margin, tol, ev->flagged());
  } else {
    c.verdict = two_sided(margin, tol, 0);
  }
  return c;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<double> Certificate::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return std::nullopt;
}

MeshEvaluation::MeshEvaluation(const TriMesh& mesh) : mesh_(mesh), digest_(mesh_digest(mesh)) {}

const CurvatureField& MeshEvaluation::field() const {
  if (!field_) field_ = curvature_field(mesh_);
  return *field_;
}

double MeshEvaluation::volume() const {
  if (!volume_) volume_ = enclosed_volume(mesh_);
  return *volume_;
}

double MeshEvaluation::willmore() const { return willmore_euclidean_style(field()); }
double MeshEvaluation::willmore_bar() const { return willmore_hyperbolic(field()); }

double MeshEvaluation::diameter() const {
  if (!diameter_) diameter_ = hmcf::diameter(mesh_);
  return *diameter_;
}

Certificate check_willmore_sphere_bound(const MeshEvaluation& ev) {
  const double lhs = ev.willmore_bar(), rhs = 4.0 * kPi;
  return make("willmore_sphere_bound", lhs, rhs, ">=", lhs - rhs, 0.05 * rhs, &ev);
}

Certificate check_torus_willmore_bound(const MeshEvaluation& ev, double c0) {
  if (ev.euler() != 0) throw DomainError("not a torus (euler characteristic " + std::to_string(ev.euler()) + ")");
  const double lhs = ev.willmore_bar();
  return make("torus_willmore_bound", lhs, c0, ">=", lhs - c0, 0.05 * c0, &ev);
}

Certificate check_isoperimetric(const MeshEvaluation& ev) {
  const double A = ev.area(), V = ev.volume();
  if (!(V >= 0.0)) {
    Certificate c = make("isoperimetric", A, 0.0, ">=", 0.0, 0.0, &ev);
    c.verdict = Verdict::fail;
    c.note = "negative enclosed volume: mesh orientation is inward";
    return c;
  }
  const double rhs = analytic::iso_profile_area(V);
  Certificate c = make("isoperimetric", A, rhs, ">=", A - rhs, 0.02 * rhs, &ev);
  c.extras.push_back({"volume", V});
  return c;
}

Certificate check_torus_singularity(const MeshEvaluation& ev, double c0) {
  if (ev.euler() != 0) throw DomainError("not a torus (euler characteristic " + std::to_string(ev.euler()) + ")");
  const double V = ev.volume(), A = ev.area();
  const double rhs = analytic::iso_profile_integral(A, c0);
  const double tol = 0.02 * rhs;
  Certificate c = make("torus_singularity", V, rhs, ">", V - rhs, tol, &ev);
  c.verdict = one_directional(V - rhs, tol, ev.flagged());
  c.extras.push_back({"area", A});
  c.extras.push_back({"c0", c0});
  if (A > 2.0 * kPi && c0 > 4.0 * kPi) c.extras.push_back({"deficit_constant", analytic::torus_deficit_constant(c0)});
  c.note = "one-directional: pass certifies a singularity before the volume vanishes, fail certifies nothing";
  return c;
}

Certificate check_dumbbell_singularity(double area0, double d, std::optional<double> T0opt) {
  if (!(area0 > 0.0) || !(d > 0.0)) throw DomainError("check_dumbbell_singularity: area and d must be positive");
  const double T0 = T0opt ? *T0opt : analytic::extinction_time(1.0);
  const double lhs = area0 * area0;
  const double rhs = 16.0 * kPi * kPi / 49.0 * T0 * d * d;
  const double tol = 1e-6 * rhs;
  Certificate c = make("dumbbell_singularity", lhs, rhs, "<", rhs - lhs, tol, nullptr);
  c.verdict = one_directional(rhs - lhs, tol, 0);
  c.extras.push_back({"t0", 49.0 * area0 * area0 / (16.0 * kPi * kPi * d * d)});
  c.extras.push_back({"T0", T0});
  c.extras.push_back({"area0", area0});
  c.extras.push_back({"d", d});
  Fnv1a h;
  h.add(area0).add(d).add(T0);
  c.inputs_digest = h.hex();
  c.note = "one-directional: pass certifies a singularity before t0 < T0, fail certifies nothing";
  return c;
}

Certificate check_diameter_bound(double diam, double area, double willmore, int flagged, const std::string& digest) {
  const double rhs = 7.0 / (2.0 * kPi) * std::sqrt(area * willmore);
  Certificate c = make("diameter_bound", diam, rhs, "<=", rhs - diam, 0.02 * rhs, nullptr);
  c.verdict = two_sided(rhs - diam, 0.02 * rhs, flagged);
  c.inputs_digest = digest;
  return c;
}

Certificate check_diameter_bound(const MeshEvaluation& ev) {
  return check_diameter_bound(ev.diameter(), ev.area(), ev.willmore(), ev.flagged(), ev.digest());
}

Certificate check_local_monotonicity(const MeshEvaluation& ev, int32_t center, double rho0) {
  const TriMesh& m = ev.mesh();
  if (center < 0 || center >= m.num_vertices()) throw DomainError("check_local_monotonicity: center out of range");
  if (!(rho0 > 0.0)) throw DomainError("check_local_monotonicity: rho0 must be positive");
  const HPoint& c = m.vertex(center);
  std::vector<bool> inside(m.num_vertices());
  for (int32_t v = 0; v < m.num_vertices(); ++v) inside[v] = hdist(c, m.vertex(v)) < rho0;
  double area = 0.0;
  for (int32_t f = 0; f < m.num_faces(); ++f) {
    const Face& x = m.faces()[f];
    if (inside[x[0]] && inside[x[1]] && inside[x[2]]) area += face_area(m, f);
  }
  const CurvatureField& cf = ev.field();
  double will = 0.0;
  for (int32_t v = 0; v < m.num_vertices(); ++v)
    if (inside[v]) will += cf.H[v] * cf.H[v] * cf.area[v];
  const double rhs = (1.0 / (rho0 * rho0) + 0.5) * area + 0.25 * will;
  Certificate cert = make("local_monotonicity", kPi, rhs, "<=", rhs - kPi, 0.05 * kPi, &ev);
  cert.extras.push_back({"center", static_cast<double>(center)});
  cert.extras.push_back({"rho0", rho0});
  cert.extras.push_back({"ball_area", area});
  const double edge = max_incident_edge(m, center);
  if (rho0 < 2.0 * edge) {
    cert.verdict = Verdict::inconclusive;
    cert.note = "ball radius below twice the local edge length";
  }
  return cert;
}

namespace {

Fnv1a pair_digest(const PairResult& p) {
  Fnv1a h;
  h.add(p.d0).add(p.max_edge0);
  for (const PairRecord& r : p.records) h.add(r.t).add(r.d);
  return h;
}

}  // namespace

Certificate check_comparison_monitor(const PairResult& p) {
  const double tol_mesh = 3.0 * p.max_edge0;
  double lo = std::numeric_limits<double>::infinity();
  double t_at = 0.0;
  for (const PairRecord& r : p.records)
    if (r.monitorF1 < lo) {
      lo = r.monitorF1;
      t_at = r.t;
    }
  if (p.records.empty()) lo = 0.0;
  Certificate c = make("comparison_monitor", lo, 0.0, ">=", lo, std::sinh(0.5 * tol_mesh), nullptr);
  c.inputs_digest = pair_digest(p).hex();
  c.extras.push_back({"d0", p.d0});
  c.extras.push_back({"tol_mesh", tol_mesh});
  c.extras.push_back({"t_at_min", t_at});
  if (p.d0 == 0.0) {
    c.verdict = Verdict::pass;
    c.note = "surfaces touch initially; the bound is trivial";
  }
  return c;
}

Certificate check_comparison_monitor_weak(const PairResult& p) {
  const double tol_mesh = 3.0 * p.max_edge0;
  double lo = std::numeric_limits<double>::infinity();
  for (const PairRecord& r : p.records) lo = std::min(lo, r.monitorFa1);
  if (p.records.empty()) lo = 0.0;
  Certificate c = make("comparison_monitor_weak", lo, 0.0, ">=", lo, tol_mesh, nullptr);
  c.inputs_digest = pair_digest(p).hex();
  c.extras.push_back({"d0", p.d0});
  c.extras.push_back({"tol_mesh", tol_mesh});
  if (p.d0 == 0.0) {
    c.verdict = Verdict::pass;
    c.note = "surfaces touch initially; the bound is trivial";
  }
  return c;
}

Certificate check_conformal_invariance(const MeshEvaluation& ev, std::optional<double> fraction) {
  const double frac = fraction ? *fraction : (ev.euler() == 0 ? 0.05 : 0.03);
  const double lhs = conformal_energy(ev.mesh(), Metric::euclidean_ball);
  const double rhs = conformal_energy(ev.mesh(), Metric::hyperbolic);
  const double tol = frac * std::max(std::abs(lhs), std::abs(rhs));
  return make("conformal_invariance", lhs, rhs, "approx", -std::abs(lhs - rhs), tol, &ev);
}

const std::vector<std::string>& mesh_certificate_names() {
  static const std::vector<std::string> names = {
      "willmore_sphere_bound", "torus_willmore_bound", "isoperimetric",      "torus_singularity",
      "diameter_bound",        "local_monotonicity",   "conformal_invariance"};
  return names;
}

}  // namespace hmcf
