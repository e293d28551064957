#include <doctest.h>

#include "hmcf/analytic.hpp"
#include "hmcf/errors.hpp"
#include "hmcf/flow.hpp"
#include "hmcf/shapes.hpp"

using namespace hmcf;

namespace {

double mean_radius(const TriMesh& m, const HPoint& c = HPoint::origin()) {
  double s = 0.0;
  for (const HPoint& p : m.vertices()) s += hdist(p, c);
  return s / m.num_vertices();
}

const RunResult& small_sphere_run() {
  static const RunResult r = run(gen_sphere(1.0, HPoint::origin(), 642), FlowConfig{});
  return r;
}

}  // namespace

TEST_CASE("flow config ranges") {
  FlowConfig c;
  CHECK_NOTHROW(c.check());
  c.cfl = 0.0;
  CHECK_THROWS_AS(c.check(), DomainError);
  c = FlowConfig{};
  c.record_every = 0;
  CHECK_THROWS_AS(c.check(), DomainError);
  c = FlowConfig{};
  c.tangential = -1.0;
  CHECK_THROWS_AS(c.check(), DomainError);
  c = FlowConfig{};
  c.remesh = true;
  c.remesh_ratio = 1.5;
  CHECK_THROWS_AS(c.check(), DomainError);
}

TEST_CASE("stable dt") {
  StepMetrics m;
  m.minEdge = 0.1;
  m.maxAbsH = 2.0;
  FlowConfig c;
  CHECK(stable_dt(m, c) == doctest::Approx(0.25 * 0.01));
  m.maxAbsH = 20.0;
  // curvature limit: cfl e^2 / (H e) = 0.25 * 0.1 / 20 versus cfl / H^2
  CHECK(stable_dt(m, c) == doctest::Approx(std::min(0.25 * 0.1 / 20.0, 0.25 / 400.0)));
}

TEST_CASE("one step shrinks a sphere at rate coth r") {
  const FlowConfig c;
  const FlowState s0 = make_state(gen_sphere(1.0, HPoint::origin(), 2562), c);
  CHECK(s0.status == FlowStatus::running);
  const double dt = 1e-3;
  const FlowState s1 = step(s0, c, dt);
  CHECK(s1.t == dt);
  CHECK(s1.step_index == 1);
  CHECK(s1.dt_last == dt);
  const double rate = (mean_radius(s0.mesh) - mean_radius(s1.mesh)) / dt;
  CHECK(rate == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(0.02));
  for (const HPoint& p : s1.mesh.vertices()) REQUIRE(p.constraint_violation() < 1e-12);
}

TEST_CASE("the redistribution term does not change the shape to first order") {
  FlowConfig with, without;
  without.tangential = 0.0;
  const FlowState s0 = make_state(gen_ellipsoidal(1.0, 1.5, 2562), with);
  const FlowState a = step(s0, with, 1e-4), b = step(s0, without, 1e-4);
  CHECK(a.metrics.V == doctest::Approx(b.metrics.V).epsilon(1e-4));
  CHECK(a.metrics.A == doctest::Approx(b.metrics.A).epsilon(1e-4));
}

TEST_CASE("sphere flows to extinction near the analytic time") {
  const RunResult& r = small_sphere_run();
  CHECK(r.final_state.status == FlowStatus::extinct);
  CHECK(r.final_state.t == doctest::Approx(analytic::extinction_time(1.0)).epsilon(0.05));
  CHECK(r.final_state.t == doctest::Approx(0.4338).epsilon(0.05));
  CHECK(r.records.front().step == 0);
  CHECK(r.records.back().step == r.final_state.step_index);
  for (size_t i = 1; i < r.records.size(); ++i) {
    REQUIRE(r.records[i].A < r.records[i - 1].A);
    REQUIRE(r.records[i].V < r.records[i - 1].V);
    REQUIRE(r.records[i].t > r.records[i - 1].t);
  }
}

TEST_CASE("area and volume follow the evolution identities") {
  const RunResult& r = small_sphere_run();
  int checked = 0;
  for (size_t i = 1; i + 1 < r.records.size(); ++i) {
    const DiagnosticsRecord &p = r.records[i - 1], &c = r.records[i], &n = r.records[i + 1];
    if (n.maxAbsH >= 5.0) break;
    const double dAdt = (n.A - p.A) / (n.t - p.t), dVdt = (n.V - p.V) / (n.t - p.t);
    REQUIRE(dAdt == doctest::Approx(-2.0 * c.W).epsilon(0.03));
    REQUIRE(dVdt == doctest::Approx(-c.intH).epsilon(0.03));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("record_every thins the records") {
  FlowConfig c;
  c.record_every = 10;
  const RunResult r = run(gen_sphere(1.0, HPoint::origin(), 642), c);
  const int steps = r.final_state.step_index;
  CHECK(r.records.size() == static_cast<size_t>(steps / 10 + 1 + (steps % 10 ? 1 : 0)));
  for (size_t i = 0; i + 1 < r.records.size(); ++i) CHECK(r.records[i].step % 10 == 0);
}

TEST_CASE("runs are deterministic") {
  FlowConfig c;
  c.max_steps = 50;
  const RunResult a = run(gen_ellipsoidal(0.8, 1.5, 642), c);
  const RunResult b = run(gen_ellipsoidal(0.8, 1.5, 642), c);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].t == b.records[i].t);
    CHECK(a.records[i].A == b.records[i].A);
    CHECK(a.records[i].W == b.records[i].W);
  }
  CHECK(a.final_state.status == FlowStatus::max_steps);
  CHECK(a.final_state.step_index == 50);
}

TEST_CASE("stepping a stopped flow is an error") {
  FlowConfig c;
  c.max_steps = 1;
  const RunResult r = run(gen_sphere(1.0, HPoint::origin(), 162), c);
  CHECK(r.final_state.status == FlowStatus::max_steps);
  CHECK_THROWS_AS(step(r.final_state, c), DomainError);
}

TEST_CASE("max_steps zero returns the initial state without records") {
  FlowConfig c;
  c.max_steps = 0;
  const RunResult r = run(gen_sphere(1.0, HPoint::origin(), 162), c);
  CHECK(r.records.empty());
  CHECK(r.final_state.step_index == 0);
}

TEST_CASE("observer sees every step") {
  FlowConfig c;
  c.max_steps = 25;
  c.record_every = 5;
  int seen = 0;
  run(gen_sphere(1.0, HPoint::origin(), 162), c, std::nullopt, [&](const FlowState&) { ++seen; });
  CHECK(seen == 25);
}

TEST_CASE("remeshing flow still reaches extinction") {
  FlowConfig c;
  c.remesh = true;
  c.remesh_ratio = 0.3;
  const RunResult r = run(gen_sphere(1.0, HPoint::origin(), 642), c);
  CHECK(r.final_state.status == FlowStatus::extinct);
  CHECK(r.final_state.t == doctest::Approx(analytic::extinction_time(1.0)).epsilon(0.05));
}

TEST_CASE("dumbbell pinches off at the neck") {
  ShapeSpec spec;
  spec.kind = ShapeKind::dumbbell;
  spec.resolution = 8192;
  FlowConfig c;
  c.record_every = 20;
  const RunResult r = run(generate(spec), c, shape_axis(spec));
  CHECK(r.final_state.status == FlowStatus::singular);
  REQUIRE(r.records.back().neckRadius.has_value());
  CHECK(*r.records.front().neckRadius == doctest::Approx(0.1).epsilon(0.01));
  CHECK(*r.records.back().neckRadius < 0.2 * 0.1);
  CHECK(r.records.back().A > 0.5 * r.records.front().A);
  CHECK(r.records.back().maxAbsH > 5.0 * r.records.front().maxAbsH);
}

TEST_CASE("neck radius") {
  const Axis ax{exp_map(HPoint::origin(), Vec4(0, -4, 0, 0)), exp_map(HPoint::origin(), Vec4(0, 4, 0, 0))};
  CHECK(neck_radius(gen_dumbbell(8.0, 0.15, 8192), ax) == doctest::Approx(0.15).epsilon(0.01));
  CHECK_THROWS_AS(neck_radius(gen_sphere(1.0, HPoint::origin(), 162), Axis{ax.a, ax.a}), DomainError);
  // a unit sphere at the origin has no vertex in the middle third of a long axis shifted away from it
  const Axis far{exp_map(HPoint::origin(), Vec4(0, 3, 0, 0)), exp_map(HPoint::origin(), Vec4(0, 9, 0, 0))};
  CHECK_THROWS_AS(neck_radius(gen_sphere(1.0, HPoint::origin(), 162), far), DomainError);
}

TEST_CASE("paired flow of identical meshes keeps zero distance") {
  FlowConfig c;
  c.max_steps = 40;
  const TriMesh m = gen_sphere(1.0, HPoint::origin(), 162);
  const PairResult p = run_pair(m, m, c);
  CHECK(p.d0 == 0.0);
  for (const PairRecord& r : p.records) REQUIRE(r.d == 0.0);
}

TEST_CASE("nested spheres stay apart until the inner one vanishes") {
  const PairResult p =
      run_pair(gen_sphere(0.5, HPoint::origin(), 642), gen_sphere(1.0, HPoint::origin(), 642), FlowConfig{});
  CHECK(p.a.status == FlowStatus::extinct);
  CHECK(p.b.status == FlowStatus::running);
  CHECK(p.d0 == doctest::Approx(0.5).epsilon(0.02));
  for (const PairRecord& r : p.records) REQUIRE(r.d > 0.0);
  CHECK(p.records.back().t == doctest::Approx(analytic::extinction_time(0.5)).epsilon(0.05));
}

TEST_CASE("separated spheres satisfy the comparison monitors") {
  const Isometry left = Isometry::boost(Vec3(1, 0, 0), -2.0), right = Isometry::boost(Vec3(1, 0, 0), 2.0);
  const TriMesh s = gen_sphere(1.0, HPoint::origin(), 642);
  const PairResult p = run_pair(s.transformed(left), s.transformed(right), FlowConfig{});
  CHECK(p.d0 == doctest::Approx(2.0).epsilon(0.01));
  const double tol = 3.0 * p.max_edge0;
  for (const PairRecord& r : p.records) {
    REQUIRE(r.monitorF1 >= -std::sinh(0.5 * tol));
    REQUIRE(r.monitorFa1 >= -tol);
    REQUIRE(r.diameter >= 3.9);
  }
  CHECK(p.records.front().diameter == doctest::Approx(6.0).epsilon(0.01));
}
