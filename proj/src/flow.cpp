#include "hmcf/flow.hpp"

#include "hmcf/remesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hmcf {

const char* to_string(FlowStatus s) noexcept {
  switch (s) {
    case FlowStatus::running: return "running";
    case FlowStatus::extinct: return "extinct";
    case FlowStatus::singular: return "singular";
    case FlowStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

void FlowConfig::check() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("flow config: cfl must lie in (0, 1]");
  if (!(dt_min > 0.0)) throw DomainError("flow config: dt_min must be positive");
  if (!(h_max_abs > 0.0)) throw DomainError("flow config: h_max_abs must be positive");
  if (max_steps < 0) throw DomainError("flow config: max_steps must be nonnegative");
  if (record_every < 1) throw DomainError("flow config: record_every must be at least 1");
  if (!(tangential >= 0.0)) throw DomainError("flow config: tangential must be nonnegative");
  if (remesh && !(remesh_ratio > 0.0 && remesh_ratio < 1.0))
    throw DomainError("flow config: remesh ratio must lie in (0, 1)");
}

StepMetrics measure(const TriMesh& mesh, const CurvatureField& cf) {
  StepMetrics m;
  m.A = cf.total_area;
  m.V = enclosed_volume(mesh);
  m.W = willmore_euclidean_style(cf);
  m.Wbar = willmore_hyperbolic(cf);
  m.intH = mean_curvature_integral(cf);
  for (double h : cf.H) m.maxAbsH = std::max(m.maxAbsH, std::abs(h));
  const EdgeStats e = edge_stats(mesh);
  m.minEdge = e.min;
  m.maxEdge = e.max;
  m.meanEdge = e.mean;
  m.flagged = cf.flagged;
  return m;
}

double stable_dt(const StepMetrics& m, const FlowConfig& config) {
  const double h = m.maxAbsH, e = m.minEdge;
  double dt = config.cfl * e * e / std::max(1.0, h * e);
  if (h > 0.0) dt = std::min(dt, config.cfl / (h * h));
  return dt;
}

namespace {

void evaluate_status(FlowState& s, const FlowConfig& config) {
  const StepMetrics& m = s.metrics;
  std::ostringstream why;
  if (m.V < 1e-4 * s.V0 || m.A < 1e-4 * s.A0) {
    s.status = FlowStatus::extinct;
    why << "A=" << m.A << " V=" << m.V << " below 1e-4 of initial";
  } else if (m.maxAbsH > config.h_max_abs) {
    s.status = FlowStatus::singular;
    why << "max|H|=" << m.maxAbsH << " exceeds " << config.h_max_abs;
  } else if (m.flagged > 0.005 * s.mesh.num_faces()) {
    s.status = FlowStatus::singular;
    why << m.flagged << " degenerate faces of " << s.mesh.num_faces();
  } else if (stable_dt(m, config) < config.dt_min) {
    s.status = FlowStatus::singular;
    why << "stable dt " << stable_dt(m, config) << " below dt_min " << config.dt_min;
  } else if (s.step_index >= config.max_steps) {
    s.status = FlowStatus::max_steps;
    why << "reached " << config.max_steps << " steps";
  }
  s.reason = why.str();
}

// Tangential pull toward the neighbor average, scaled by the local edge length
// squared so that dt / edge^2 <= cfl keeps it a stable diffusion. It only
// reparametrizes the surface and keeps edge lengths from drifting apart.
Vec4 tangential_drift(const FlowState& s, int32_t v, const FlowConfig& config) {
  if (config.tangential <= 0.0) return Vec4::Zero();
  const HPoint& p = s.mesh.vertex(v);
  const auto ring = s.mesh.topology().vertex_neighbors(v);
  Vec4 u = Vec4::Zero();
  double e2 = 0.0;
  for (int32_t q : ring) {
    const Vec4 l = log_map(p, s.mesh.vertex(q)).v;
    u += l;
    e2 += minkowski_inner(l, l);
  }
  u /= static_cast<double>(ring.size());
  e2 /= static_cast<double>(ring.size());
  const Vec4& n = s.field.normal[v];
  u -= minkowski_inner(u, n) * n;
  return (config.tangential / e2) * u;
}

void refresh(FlowState& s) {
  s.field = curvature_field(s.mesh);
  s.metrics = measure(s.mesh, s.field);
}

}  // namespace

FlowState make_state(TriMesh mesh, const FlowConfig& config) {
  config.check();
  FlowState s;
  s.mesh = std::move(mesh);
  refresh(s);
  s.A0 = s.metrics.A;
  s.V0 = s.metrics.V;
  evaluate_status(s, config);
  return s;
}

FlowState step(const FlowState& state, const FlowConfig& config, std::optional<double> dt_opt) {
  if (state.status != FlowStatus::running) throw DomainError("step: flow is not running");
  const double dt = dt_opt ? *dt_opt : stable_dt(state.metrics, config);
  const auto& verts = state.mesh.vertices();
  std::vector<HPoint> next;
  next.reserve(verts.size());
  for (size_t v = 0; v < verts.size(); ++v) {
    const Vec4& p = verts[v].coords();
    const Vec4 w = -dt * state.field.hvec[v] + dt * tangential_drift(state, static_cast<int32_t>(v), config);
    const double n = minkowski_norm(w);
    const Vec4 x = n < 1e-14 ? p : Vec4(std::cosh(n) * p + (std::sinh(n) / n) * w);
    const double q = -minkowski_inner(x, x);
    if (!x.allFinite() || !(q > 0.0)) {
      std::ostringstream dump;
      dump << "non-finite position at step " << state.step_index + 1 << ": vertex " << v << " t=" << state.t
           << " dt=" << dt << " H=" << state.field.H[v] << " p=(" << p.transpose() << ") hvec=("
           << state.field.hvec[v].transpose() << ") A=" << state.metrics.A << " V=" << state.metrics.V
           << " maxAbsH=" << state.metrics.maxAbsH;
      throw FlowError(dump.str());
    }
    next.push_back(HPoint::unchecked(x / std::sqrt(q)));
  }

  FlowState s;
  s.mesh = state.mesh.with_vertices(std::move(next));
  if (config.remesh) s.mesh = collapse_short_edges(s.mesh, config.remesh_ratio);
  s.t = state.t + dt;
  s.step_index = state.step_index + 1;
  s.dt_last = dt;
  s.A0 = state.A0;
  s.V0 = state.V0;
  try {
    refresh(s);
  } catch (const NumericalError& e) {
    throw FlowError("step " + std::to_string(s.step_index) + " at t=" + std::to_string(s.t) + ": " + e.what());
  }
  if (!std::isfinite(s.metrics.A) || !std::isfinite(s.metrics.V) || !std::isfinite(s.metrics.W))
    throw FlowError("step " + std::to_string(s.step_index) + ": non-finite diagnostics");
  evaluate_status(s, config);
  return s;
}

DiagnosticsRecord make_record(const FlowState& s, const std::optional<Axis>& axis) {
  DiagnosticsRecord r;
  r.step = s.step_index;
  r.t = s.t;
  r.A = s.metrics.A;
  r.V = s.metrics.V;
  r.Wbar = s.metrics.Wbar;
  r.W = s.metrics.W;
  r.intH = s.metrics.intH;
  r.maxAbsH = s.metrics.maxAbsH;
  r.minEdge = s.metrics.minEdge;
  r.maxEdge = s.metrics.maxEdge;
  r.diameter = diameter(s.mesh);
  if (axis) {
    try {
      r.neckRadius = neck_radius(s.mesh, *axis);
    } catch (const DomainError&) {
      r.neckRadius.reset();
    }
  }
  r.flaggedFaces = s.metrics.flagged;
  return r;
}

RunResult run(TriMesh mesh, const FlowConfig& config, const std::optional<Axis>& axis, const StepObserver& observer) {
  RunResult out;
  out.final_state = make_state(std::move(mesh), config);
  if (config.max_steps == 0) return out;
  FlowState& s = out.final_state;
  out.records.push_back(make_record(s, axis));
  while (s.status == FlowStatus::running) {
    s = step(s, config);
    if (observer) observer(s);
    if (s.status != FlowStatus::running || s.step_index % config.record_every == 0)
      out.records.push_back(make_record(s, axis));
  }
  return out;
}

namespace {

PairRecord pair_record(const FlowState& a, const FlowState& b, double d0) {
  PairRecord r;
  r.step = a.step_index;
  r.t = a.t;
  r.a = make_record(a, std::nullopt);
  r.b = make_record(b, std::nullopt);
  r.d = surface_distance(a.mesh, b.mesh);
  r.diameter = std::max({r.a.diameter, r.b.diameter, max_distance(a.mesh, b.mesh)});
  r.monitorF1 = std::exp(r.t) * std::sinh(0.5 * r.d) - std::sinh(0.5 * d0);
  r.monitorFa1 = std::exp(r.t) * r.d - d0;
  return r;
}

}  // namespace

PairResult run_pair(TriMesh ma, TriMesh mb, const FlowConfig& config) {
  PairResult out;
  out.a = make_state(std::move(ma), config);
  out.b = make_state(std::move(mb), config);
  out.max_edge0 = std::max(out.a.metrics.maxEdge, out.b.metrics.maxEdge);
  out.d0 = surface_distance(out.a.mesh, out.b.mesh);
  if (config.max_steps == 0) return out;
  out.records.push_back(pair_record(out.a, out.b, out.d0));
  auto running = [&] { return out.a.status == FlowStatus::running && out.b.status == FlowStatus::running; };
  while (running()) {
    const double dt = std::min(stable_dt(out.a.metrics, config), stable_dt(out.b.metrics, config));
    out.a = step(out.a, config, dt);
    out.b = step(out.b, config, dt);
    if (!running() || out.a.step_index % config.record_every == 0)
      out.records.push_back(pair_record(out.a, out.b, out.d0));
  }
  return out;
}

double neck_radius(const TriMesh& mesh, const Axis& axis) {
  const double L = hdist(axis.a, axis.b);
  if (!(L > 0.0)) throw DomainError("neck_radius: axis endpoints coincide");
  const Vec4 e0 = axis.a.coords();
  const Vec4 e1 = log_map(axis.a, axis.b).v / L;
  double best = std::numeric_limits<double>::infinity();
  for (const HPoint& p : mesh.vertices()) {
    const double alpha = -minkowski_inner(p.coords(), e0);
    const double beta = minkowski_inner(p.coords(), e1);
    const double s = std::atanh(beta / alpha);
    if (s < L / 3.0 || s > 2.0 * L / 3.0) continue;
    best = std::min(best, std::asinh(std::sqrt(std::max(0.0, alpha * alpha - beta * beta - 1.0))));
  }
  if (!std::isfinite(best)) throw DomainError("neck_radius: no vertex in the middle third of the axis");
  return best;
}

}  // namespace hmcf
