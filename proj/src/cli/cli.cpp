#include "hmcf/cli.hpp"

#include "internal.hpp"

#include "hmcf/analytic.hpp"
#include "hmcf/digest.hpp"
#include "hmcf/errors.hpp"
#include "hmcf/hmesh.hpp"

#include <CLI11.hpp>
#include <boost/math/tools/roots.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace hmcf::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
// Default vertex budget for tube shapes; the sphere default cannot resolve a thin tube.
constexpr int kTubeResolution = 8192;

// Thrown for bad arguments that CLI11 cannot detect itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path output_root() {
  const char* env = std::getenv("HMCF_OUT");
  return env && *env ? fs::path(env) : fs::current_path();
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw std::runtime_error("cannot create " + p.string() + ": " + ec.message());
}

std::string sidecar_path(const std::string& mesh_path) { return mesh_path + ".manifest.json"; }

json base_manifest(const char* command) {
  json m;
  m["artifact"] = "hmcf";
  m["version"] = kVersion;
  m["command"] = command;
  return m;
}

// ---- flow inputs ---------------------------------------------------------

struct FlowFlags {
  CLI::Option* cfl = nullptr;
  CLI::Option* dt_min = nullptr;
  CLI::Option* h_max = nullptr;
  CLI::Option* max_steps = nullptr;
  CLI::Option* record_every = nullptr;
  CLI::Option* remesh = nullptr;
  CLI::Option* remesh_ratio = nullptr;
  CLI::Option* tangential = nullptr;
  FlowConfig values;
  std::string remesh_mode = "off";
};

void add_flow_flags(CLI::App* sub, FlowFlags& f) {
  f.cfl = sub->add_option("--cfl", f.values.cfl, "CFL factor of the time step");
  f.dt_min = sub->add_option("--dt-min", f.values.dt_min, "singular when the stable dt drops below this");
  f.h_max = sub->add_option("--h-max", f.values.h_max_abs, "singular when max |H| exceeds this");
  f.max_steps = sub->add_option("--max-steps", f.values.max_steps, "step budget");
  f.record_every = sub->add_option("--record-every", f.values.record_every, "diagnostics row stride");
  f.remesh = sub->add_option("--remesh", f.remesh_mode, "off or collapse_short_edges")
                 ->check(CLI::IsMember({"off", "collapse_short_edges"}));
  f.remesh_ratio = sub->add_option("--remesh-ratio", f.values.remesh_ratio, "collapse edges below ratio * mean edge");
  f.tangential = sub->add_option("--tangential", f.values.tangential, "vertex redistribution strength, 0 disables");
}

// Flags override values from the config file.
FlowConfig apply_flags(FlowConfig c, const FlowFlags& f) {
  if (f.cfl->count()) c.cfl = f.values.cfl;
  if (f.dt_min->count()) c.dt_min = f.values.dt_min;
  if (f.h_max->count()) c.h_max_abs = f.values.h_max_abs;
  if (f.max_steps->count()) c.max_steps = f.values.max_steps;
  if (f.record_every->count()) c.record_every = f.values.record_every;
  if (f.remesh->count()) c.remesh = f.remesh_mode == "collapse_short_edges";
  if (f.remesh_ratio->count()) c.remesh_ratio = f.values.remesh_ratio;
  if (f.tangential->count()) c.tangential = f.values.tangential;
  c.check();
  return c;
}

// One surface to flow: its mesh and whatever is known about how it was made.
struct Source {
  TriMesh mesh;
  std::optional<ShapeSpec> shape;
  std::optional<Axis> axis;
  std::string mesh_path;  // empty when generated from the shape
  std::string stem;
};

// `node` holds "shape", "input" and "axis" keys as written to manifests.
Source source_from_json(const json& node, const std::string& label) {
  Source s;
  if (node.contains("shape") && !node["shape"].is_null()) s.shape = shape_from_json(node["shape"]);
  std::string want;
  std::string path;
  if (node.contains("input") && node["input"].is_object()) {
    const json& in = node["input"];
    if (in.contains("mesh_digest")) want = in["mesh_digest"].get<std::string>();
    if (in.contains("mesh") && in["mesh"].is_string()) path = in["mesh"].get<std::string>();
  }
  if (!path.empty() && fs::exists(path)) {
    s.mesh = read_hmesh(path);
    s.mesh_path = path;
  } else if (s.shape) {
    s.mesh = generate(*s.shape);
  } else {
    throw UsageError(label + ": no mesh input and no shape to generate from");
  }
  if (!want.empty() && mesh_digest(s.mesh) != want)
    throw std::runtime_error(label + ": mesh digest " + mesh_digest(s.mesh) + " does not match manifest " + want);
  if (node.contains("axis") && !node["axis"].is_null()) s.axis = axis_from_json(node["axis"]);
  else if (s.shape) s.axis = shape_axis(*s.shape);
  s.stem = s.shape ? to_string(s.shape->kind) : "mesh";
  return s;
}

Source source_from_mesh(const std::string& path) {
  Source s;
  s.mesh = read_hmesh(path);
  s.mesh_path = path;
  s.stem = fs::path(path).stem().string();
  const std::string side = sidecar_path(path);
  if (fs::exists(side)) {
    const json m = read_json(side);
    if (m.contains("shape") && !m["shape"].is_null()) s.shape = shape_from_json(m["shape"]);
    if (m.contains("axis") && !m["axis"].is_null()) s.axis = axis_from_json(m["axis"]);
  }
  return s;
}

json source_json(const Source& s) {
  json j;
  j["shape"] = s.shape ? to_json(*s.shape) : json(nullptr);
  j["axis"] = s.axis ? to_json(*s.axis) : json(nullptr);
  json in;
  in["mesh"] = s.mesh_path.empty() ? json(nullptr) : json(fs::absolute(s.mesh_path).string());
  in["mesh_digest"] = mesh_digest(s.mesh);
  j["input"] = in;
  return j;
}

// ---- flow ---------------------------------------------------------------

struct FlowJob {
  Source source;
  FlowConfig config;
  fs::path out_dir;
};

json status_json(const FlowState& s, double seconds) {
  json j;
  j["status"] = to_string(s.status);
  j["reason"] = s.reason;
  j["steps"] = s.step_index;
  j["t"] = s.t;
  j["dt_last"] = s.dt_last;
  j["A0"] = s.A0;
  j["V0"] = s.V0;
  j["A"] = s.metrics.A;
  j["V"] = s.metrics.V;
  j["maxAbsH"] = s.metrics.maxAbsH;
  j["flaggedFaces"] = s.metrics.flagged;
  j["wall_seconds"] = seconds;
  return j;
}

std::string run_flow_job(const FlowJob& job) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = now_iso8601();
  ensure_dir(job.out_dir);
  const RunResult res = run(job.source.mesh, job.config, job.source.axis);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_diagnostics_csv((job.out_dir / "diagnostics.csv").string(), res.records);
  write_hmesh(res.final_state.mesh, (job.out_dir / "final.hmesh").string());
  write_json(status_json(res.final_state, secs), (job.out_dir / "status.json").string());

  json m = base_manifest("flow");
  const json flow = to_json(job.config);
  const json src = source_json(job.source);
  m["digest"] = config_digest(flow, src["shape"], src["input"]["mesh_digest"].get<std::string>());
  m["flow"] = flow;
  for (const auto& [k, v] : src.items()) m[k] = v;
  m["outputs"] = {{"diagnostics", "diagnostics.csv"}, {"status", "status.json"}, {"final_mesh", "final.hmesh"}};
  m["wall_clock"] = {{"started", started}, {"seconds", secs}};
  write_json(m, (job.out_dir / "manifest.json").string());

  std::ostringstream msg;
  msg << job.out_dir.string() << ": " << to_string(res.final_state.status) << " at t = " << res.final_state.t
      << " after " << res.final_state.step_index << " steps";
  return msg.str();
}

// ---- check --------------------------------------------------------------

bool known_certificate(const std::string& name) {
  for (const auto& n : mesh_certificate_names())
    if (n == name) return true;
  return name == "dumbbell_singularity" || name == "comparison_monitor" || name == "comparison_monitor_weak";
}

struct CheckOptions {
  std::string which = "all";
  double c0 = 2.0 * kPi * kPi;
  std::optional<double> rho0;
  int center = 0;
  std::optional<double> area0;
  std::optional<double> d;
};

std::vector<Certificate> check_mesh(const TriMesh& mesh, const CheckOptions& o, std::optional<double> dumbbell_d,
                                    std::optional<double> area0) {
  const MeshEvaluation ev(mesh);
  const bool all = o.which == "all";
  const bool torus = ev.euler() == 0;
  std::vector<Certificate> out;
  auto want = [&](const char* n) { return all || o.which == n; };
  if (want("willmore_sphere_bound")) out.push_back(check_willmore_sphere_bound(ev));
  if ((all && torus) || o.which == "torus_willmore_bound") out.push_back(check_torus_willmore_bound(ev, o.c0));
  if (want("isoperimetric")) out.push_back(check_isoperimetric(ev));
  if ((all && torus) || o.which == "torus_singularity") out.push_back(check_torus_singularity(ev, o.c0));
  if (want("diameter_bound")) out.push_back(check_diameter_bound(ev));
  if (want("local_monotonicity")) {
    const double rho0 = o.rho0 ? *o.rho0 : std::sqrt(ev.area() / ev.willmore());
    out.push_back(check_local_monotonicity(ev, o.center, rho0));
  }
  if (want("conformal_invariance")) out.push_back(check_conformal_invariance(ev));
  if ((all && dumbbell_d) || o.which == "dumbbell_singularity") {
    if (!dumbbell_d) throw UsageError("dumbbell_singularity needs --d or a dumbbell manifest");
    out.push_back(check_dumbbell_singularity(area0 ? *area0 : ev.area(), *dumbbell_d));
  }
  return out;
}

std::vector<Certificate> check_pair_dir(const fs::path& dir, const CheckOptions& o) {
  const CsvTable t = read_csv((dir / "pair.csv").string());
  const json st = read_json((dir / "status.json").string());
  PairResult p;
  p.d0 = st.at("d0").get<double>();
  p.max_edge0 = st.at("max_edge0").get<double>();
  const auto step = t.values("step"), tt = t.values("t"), d = t.values("d"), f1 = t.values("monitorF1"),
             fa1 = t.values("monitorFa1");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    PairRecord r;
    r.step = static_cast<int>(step[i]);
    r.t = tt[i];
    r.d = d[i];
    r.monitorF1 = f1[i];
    r.monitorFa1 = fa1[i];
    p.records.push_back(r);
  }
  std::vector<Certificate> out;
  if (o.which == "all" || o.which == "comparison_monitor") out.push_back(check_comparison_monitor(p));
  if (o.which == "all" || o.which == "comparison_monitor_weak") out.push_back(check_comparison_monitor_weak(p));
  if (out.empty()) throw UsageError("certificate '" + o.which + "' does not apply to a pair run");
  return out;
}

std::vector<Certificate> run_check(const std::string& target, const CheckOptions& o) {
  if (o.which != "all" && !known_certificate(o.which)) throw UsageError("unknown certificate '" + o.which + "'");
  const bool pair_only = o.which == "comparison_monitor" || o.which == "comparison_monitor_weak";
  const fs::path p(target);
  if (fs::is_directory(p)) {
    if (fs::exists(p / "pair.csv")) return check_pair_dir(p, o);
    if (pair_only) throw UsageError("certificate '" + o.which + "' needs a pair run directory");
    if (!fs::exists(p / "final.hmesh")) throw std::runtime_error(target + ": no final.hmesh or pair.csv");
    std::optional<double> d = o.d, area0 = o.area0;
    if (fs::exists(p / "manifest.json")) {
      const json m = read_json((p / "manifest.json").string());
      if (!d && m.contains("shape") && !m["shape"].is_null()) {
        const ShapeSpec s = shape_from_json(m["shape"]);
        if (s.kind == ShapeKind::dumbbell) d = s.d;
      }
    }
    if (!area0 && fs::exists(p / "diagnostics.csv")) {
      const CsvTable t = read_csv((p / "diagnostics.csv").string());
      if (!t.rows.empty()) area0 = t.values("A").front();
    }
    return check_mesh(read_hmesh((p / "final.hmesh").string()), o, d, area0);
  }
  if (!fs::exists(p)) throw std::runtime_error("cannot open " + target);
  if (pair_only) throw UsageError("certificate '" + o.which + "' needs a pair run directory");
  std::optional<double> d = o.d;
  if (!d && fs::exists(sidecar_path(target))) {
    const json m = read_json(sidecar_path(target));
    if (m.contains("shape") && !m["shape"].is_null()) {
      const ShapeSpec s = shape_from_json(m["shape"]);
      if (s.kind == ShapeKind::dumbbell) d = s.d;
    }
  }
  return check_mesh(read_hmesh(target), o, d, o.area0);
}

// ---- profile ------------------------------------------------------------

// Radius of the geodesic sphere with volume v, by bisection on the closed form.
double sphere_radius_for_volume(double v) {
  if (v == 0.0) return 0.0;
  double hi = 1.0;
  while (analytic::sphere_volume(hi) < v) hi *= 2.0;
  auto f = [v](double r) { return analytic::sphere_volume(r) - v; };
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(b)); };
  const auto [lo, up] = boost::math::tools::bisect(f, 0.0, hi, tol);
  return 0.5 * (lo + up);
}

void profile_row(std::ostream& out, double r, double v) {
  const double sa = analytic::sphere_area(r);
  const double pa = analytic::iso_profile_area(v);
  out << format_double(r) << ',' << format_double(v) << ',' << format_double(sa) << ',' << format_double(pa) << ','
      << format_double(std::abs(pa - sa)) << '\n';
}

// ---- report -------------------------------------------------------------

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << s;
}

std::string fmt_cert(const Certificate& c) {
  std::ostringstream o;
  o << c.name << ": " << to_string(c.verdict) << " (lhs " << c.lhs << ' ' << c.relation << " rhs " << c.rhs
    << ", margin " << c.margin << ", tol " << c.tolerance << ")";
  return o.str();
}

void run_report(const fs::path& dir, std::ostream& out) {
  const bool pair = fs::exists(dir / "pair.csv");
  const fs::path csv = pair ? dir / "pair.csv" : dir / "diagnostics.csv";
  if (!fs::exists(csv)) throw std::runtime_error(dir.string() + ": no diagnostics CSV");
  const CsvTable t = read_csv(csv.string());
  const auto time = t.values("t");

  std::optional<ShapeSpec> shape;
  if (!pair && fs::exists(dir / "manifest.json")) {
    const json m = read_json((dir / "manifest.json").string());
    if (m.contains("shape") && !m["shape"].is_null()) shape = shape_from_json(m["shape"]);
  }
  const bool sphere = shape && shape->kind == ShapeKind::geodesic_sphere;

  auto analytic_series = [&](auto fn, const char* label) {
    Series s{label, {}, {}, "#d62728", true};
    const double T = analytic::extinction_time(shape->r);
    for (double x : time)
      if (x < T) {
        s.x.push_back(x);
        s.y.push_back(fn(analytic::sphere_radius(shape->r, x)));
      }
    return s;
  };

  struct Plot {
    const char* column;
    const char* title;
  };
  const Plot plots[] = {{"A", "area"}, {"V", "enclosed volume"}, {"Wbar", "hyperbolic Willmore energy"},
                        {"maxAbsH", "max |H|"}};
  for (const Plot& p : plots) {
    std::vector<Series> ss{{p.column, time, t.values(p.column)}};
    if (sphere && std::string(p.column) == "A")
      ss.push_back(analytic_series([](double r) { return analytic::sphere_area(r); }, "4 pi sinh^2 r(t)"));
    if (sphere && std::string(p.column) == "V")
      ss.push_back(analytic_series([](double r) { return analytic::sphere_volume(r); }, "sphere volume at r(t)"));
    write_text(dir / (std::string(p.column) + ".svg"), svg_plot(p.title, "t", p.column, ss));
  }
  if (pair) {
    std::vector<Series> ss{{"monitorF1", time, t.values("monitorF1")},
                           {"monitorFa1", time, t.values("monitorFa1"), "#2ca02c"}};
    write_text(dir / "monitor.svg", svg_plot("comparison monitors", "t", "monitor", ss));
  }

  std::ostringstream sum;
  sum << "run: " << dir.string() << '\n';
  sum << "rows: " << t.rows.size() << '\n';
  if (!t.rows.empty()) {
    sum << "final step: " << static_cast<long long>(t.values("step").back()) << '\n';
    sum << "final t: " << format_double(time.back()) << '\n';
  }
  if (fs::exists(dir / "status.json")) {
    const json st = read_json((dir / "status.json").string());
    if (st.contains("status")) sum << "status: " << st["status"].get<std::string>() << '\n';
    if (st.contains("reason") && !st["reason"].get<std::string>().empty())
      sum << "reason: " << st["reason"].get<std::string>() << '\n';
  }
  if (sphere) sum << "analytic extinction time: " << format_double(analytic::extinction_time(shape->r)) << '\n';
  sum << "certificates:\n";
  if (pair && !fs::exists(dir / "certificates.json")) {
    CheckOptions o;
    for (const Certificate& c : check_pair_dir(dir, o)) sum << "  " << fmt_cert(c) << '\n';
  }
  // The diameter bound holds for connected surfaces and needs only CSV columns,
  // so it is checked on every row of each surface.
  const std::vector<std::pair<std::string, fs::path>> single =
      pair ? std::vector<std::pair<std::string, fs::path>>{{"a", dir / "diagnostics_a.csv"}, {"b", dir / "diagnostics_b.csv"}}
           : std::vector<std::pair<std::string, fs::path>>{{"", csv}};
  for (const auto& [label, path] : single) {
    if (!fs::exists(path)) continue;
    const CsvTable d = read_csv(path.string());
    if (d.rows.empty()) continue;
    const auto diam = d.values("diam"), A = d.values("A"), W = d.values("W"), fl = d.values("flaggedFaces");
    int pass = 0, fail = 0, inconclusive = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
      const Certificate c = check_diameter_bound(diam[i], A[i], W[i], static_cast<int>(fl[i]));
      (c.verdict == Verdict::pass ? pass : c.verdict == Verdict::fail ? fail : inconclusive)++;
      worst = std::min(worst, c.margin / c.rhs);
    }
    sum << "  diameter_bound over rows" << (label.empty() ? "" : " of surface " + label) << ": " << pass << " pass, "
        << fail << " fail, " << inconclusive << " inconclusive, smallest relative margin " << worst << '\n';
  }
  if (fs::exists(dir / "certificates.json")) {
    const json cs = read_json((dir / "certificates.json").string());
    for (const json& c : cs)
      sum << "  " << c.value("name", "?") << ": " << c.value("verdict", "?") << " (lhs " << c.value("lhs", 0.0) << ", margin " << c.value("margin", 0.0) << ")\n";
  }
  write_text(dir / "summary.txt", sum.str());
  out << sum.str();
}

// ---- pair ---------------------------------------------------------------

json pair_status(const PairResult& p, const Certificate& f1, const Certificate& fa1, double secs) {
  json j;
  j["status_a"] = to_string(p.a.status);
  j["status_b"] = to_string(p.b.status);
  j["status"] = p.a.status != FlowStatus::running && p.a.status != FlowStatus::max_steps ? to_string(p.a.status)
                                                                                         : to_string(p.b.status);
  j["reason"] = !p.a.reason.empty() ? p.a.reason : p.b.reason;
  j["steps"] = p.a.step_index;
  j["t"] = p.a.t;
  j["d0"] = p.d0;
  j["max_edge0"] = p.max_edge0;
  j["monitorF1_min"] = f1.lhs;
  j["monitorFa1_min"] = fa1.lhs;
  j["comparison_monitor"] = to_json(f1);
  j["comparison_monitor_weak"] = to_json(fa1);
  j["wall_seconds"] = secs;
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mean curvature flow of closed surfaces in hyperbolic 3-space", "hmcf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // generate
  CLI::App* gen = app.add_subcommand("generate", "write an HMESH surface and its manifest");
  ShapeSpec gspec;
  std::string gkind = "sphere", gout, gconfig;
  std::vector<double> gcenter;
  auto* o_kind = gen->add_option("--kind", gkind, "sphere, ellipsoid, torus or dumbbell");
  auto* o_r = gen->add_option("--r", gspec.r, "sphere radius");
  auto* o_stretch = gen->add_option("--stretch", gspec.stretch, "ellipsoid stretch along x1");
  auto* o_d = gen->add_option("--d", gspec.d, "dumbbell center separation");
  auto* o_eps = gen->add_option("--eps", gspec.epsilon, "tube radius");
  auto* o_res = gen->add_option("--res", gspec.resolution, "target vertex count");
  auto* o_center = gen->add_option("--center", gcenter, "center as a tangent vector at the origin")->expected(3);
  gen->add_option("-o,--out", gout, "output HMESH path");
  gen->add_option("--config", gconfig, "JSON shape spec; flags override it");

  // flow
  CLI::App* flow = app.add_subcommand("flow", "run mean curvature flow");
  std::vector<std::string> finputs;
  std::string fconfig, fout;
  int fjobs = 1;
  FlowFlags fflags;
  flow->add_option("inputs", finputs, "HMESH files or run manifests");
  flow->add_option("--config", fconfig, "JSON config or run manifest; flags override it");
  flow->add_option("-o,--out", fout, "output directory (root directory with several inputs)");
  flow->add_option("--jobs", fjobs, "concurrent runs when several inputs are given")->check(CLI::PositiveNumber);
  add_flow_flags(flow, fflags);

  // pair
  CLI::App* pair = app.add_subcommand("pair", "flow two surfaces on a shared clock");
  std::vector<std::string> pinputs;
  std::string pconfig, pout;
  FlowFlags pflags;
  pair->add_option("meshes", pinputs, "two HMESH files")->expected(0, 2);
  pair->add_option("--config", pconfig, "JSON config or pair manifest; flags override it");
  pair->add_option("-o,--out", pout, "output directory");
  add_flow_flags(pair, pflags);

  // check
  CLI::App* chk = app.add_subcommand("check", "evaluate certificates");
  std::string ctarget, cout_path;
  CheckOptions copt;
  double crho0 = 0, carea0 = 0, cd = 0;
  chk->add_option("target", ctarget, "HMESH file or run directory")->required();
  chk->add_option("--which", copt.which, "certificate name or all");
  chk->add_option("--c0", copt.c0, "Willmore constant of the torus argument");
  auto* o_rho0 = chk->add_option("--rho0", crho0, "ball radius for local_monotonicity")->check(CLI::PositiveNumber);
  chk->add_option("--center", copt.center, "vertex index for local_monotonicity");
  auto* o_area0 = chk->add_option("--area0", carea0, "initial area for dumbbell_singularity");
  auto* o_cd = chk->add_option("--d", cd, "bell separation for dumbbell_singularity");
  chk->add_option("-o,--out", cout_path, "also write the JSON array here");

  // profile
  CLI::App* prof = app.add_subcommand("profile", "tabulate the isoperimetric profile");
  double v0 = 0;
  bool sweep = false;
  std::string prof_out;
  auto* o_v0 = prof->add_option("--v0", v0, "enclosed volume");
  auto* o_sweep = prof->add_flag("--sweep", sweep, "sphere radii 0.25, 0.5, ..., 3");
  o_v0->excludes(o_sweep);
  prof->add_option("-o,--out", prof_out, "CSV path instead of standard output");

  // report
  CLI::App* rep = app.add_subcommand("report", "plot a run directory");
  std::string rdir;
  rep->add_option("run-dir", rdir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << '\n' << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (*gen) {
      json base = json::object();
      if (!gconfig.empty()) {
        const json j = read_json(gconfig);
        base = j.contains("shape") ? j["shape"] : j;
      }
      ShapeSpec s = shape_from_json(base);
      if (o_kind->count()) s.kind = parse_shape_kind(gkind);
      if (o_r->count()) s.r = gspec.r;
      if (o_stretch->count()) s.stretch = gspec.stretch;
      if (o_d->count()) s.d = gspec.d;
      if (o_eps->count()) s.epsilon = gspec.epsilon;
      if (o_res->count()) s.resolution = gspec.resolution;
      else if (!base.contains("resolution") && (s.kind == ShapeKind::dumbbell || s.kind == ShapeKind::drilled_sphere_torus))
        s.resolution = kTubeResolution;
      if (o_center->count()) s.center = Vec3(gcenter[0], gcenter[1], gcenter[2]);
      s.check();
      const TriMesh mesh = generate(s);
      const fs::path path = gout.empty() ? output_root() / (std::string(to_string(s.kind)) + ".hmesh") : fs::path(gout);
      if (path.has_parent_path()) ensure_dir(path.parent_path());
      write_hmesh(mesh, path.string());
      const ValidationReport rep_v = validate(mesh);
      json m = base_manifest("generate");
      const std::string md = mesh_digest(mesh);
      m["digest"] = config_digest(json(nullptr), to_json(s), md);
      m["shape"] = to_json(s);
      const auto axis = shape_axis(s);
      m["axis"] = axis ? to_json(*axis) : json(nullptr);
      m["mesh"] = fs::absolute(path).string();
      m["mesh_digest"] = md;
      m["vertices"] = mesh.num_vertices();
      m["faces"] = mesh.num_faces();
      m["euler"] = rep_v.euler;
      m["valid"] = rep_v.ok();
      m["wall_clock"] = {{"started", now_iso8601()}};
      write_json(m, sidecar_path(path.string()));
      out << "wrote " << path.string() << ": " << mesh.num_vertices() << " vertices, " << mesh.num_faces()
          << " faces, chi = " << rep_v.euler << ", " << (rep_v.ok() ? "valid" : rep_v.summary()) << '\n';
      return rep_v.ok() ? 0 : 1;
    }

    if (*flow) {
      json cfg = json::object();
      if (!fconfig.empty()) cfg = read_json(fconfig);
      const FlowConfig fc =
          apply_flags(cfg.contains("flow") ? flow_config_from_json(cfg["flow"]) : FlowConfig{}, fflags);

      std::vector<FlowJob> jobs;
      if (finputs.empty()) {
        if (fconfig.empty()) throw UsageError("flow needs a mesh, a manifest, or --config");
        jobs.push_back({source_from_json(cfg, fconfig), fc, {}});
      }
      for (const std::string& in : finputs) {
        if (fs::path(in).extension() == ".json") {
          const json m = read_json(in);
          FlowConfig c = m.contains("flow") ? flow_config_from_json(m["flow"]) : fc;
          if (cfg.contains("flow")) c = flow_config_from_json(cfg["flow"], c);
          jobs.push_back({source_from_json(m, in), apply_flags(c, fflags), {}});
        } else {
          jobs.push_back({source_from_mesh(in), fc, {}});
        }
      }
      if (jobs.size() == 1) {
        jobs[0].out_dir = fout.empty() ? output_root() / ("flow_" + jobs[0].source.stem) : fs::path(fout);
      } else {
        const fs::path root = fout.empty() ? output_root() : fs::path(fout);
        for (std::size_t i = 0; i < jobs.size(); ++i)
          jobs[i].out_dir = root / ("flow_" + std::to_string(i) + "_" + jobs[i].source.stem);
      }

      std::vector<std::string> msgs(jobs.size());
      std::vector<std::exception_ptr> errors(jobs.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next++) < jobs.size();) {
          try {
            msgs[i] = run_flow_job(jobs[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      };
      const int nthreads = std::min<int>(fjobs, static_cast<int>(jobs.size()));
      std::vector<std::thread> pool;
      for (int k = 1; k < nthreads; ++k) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out << msgs[i] << '\n';
      }
      return 0;
    }

    if (*pair) {
      json cfg = json::object();
      if (!pconfig.empty()) cfg = read_json(pconfig);
      const FlowConfig fc =
          apply_flags(cfg.contains("flow") ? flow_config_from_json(cfg["flow"]) : FlowConfig{}, pflags);
      Source a, b;
      if (pinputs.size() == 2) {
        a = source_from_mesh(pinputs[0]);
        b = source_from_mesh(pinputs[1]);
      } else if (pinputs.empty() && cfg.contains("a") && cfg.contains("b")) {
        a = source_from_json(cfg["a"], pconfig + " (a)");
        b = source_from_json(cfg["b"], pconfig + " (b)");
      } else {
        throw UsageError("pair needs two meshes or a config with 'a' and 'b'");
      }
      const fs::path dir = pout.empty() ? output_root() / ("pair_" + a.stem + "_" + b.stem) : fs::path(pout);
      ensure_dir(dir);
      const auto t0 = std::chrono::steady_clock::now();
      const std::string started = now_iso8601();
      const PairResult res = run_pair(a.mesh, b.mesh, fc);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

      write_pair_csv((dir / "pair.csv").string(), res.records);
      std::vector<DiagnosticsRecord> ra, rb;
      for (const PairRecord& r : res.records) {
        ra.push_back(r.a);
        rb.push_back(r.b);
      }
      write_diagnostics_csv((dir / "diagnostics_a.csv").string(), ra);
      write_diagnostics_csv((dir / "diagnostics_b.csv").string(), rb);
      const Certificate f1 = check_comparison_monitor(res), fa1 = check_comparison_monitor_weak(res);
      write_json(pair_status(res, f1, fa1, secs), (dir / "status.json").string());
      write_json(json::array({to_json(f1), to_json(fa1)}), (dir / "certificates.json").string());

      json m = base_manifest("pair");
      const json flowj = to_json(fc);
      const json ja = source_json(a), jb = source_json(b);
      m["digest"] = config_digest(flowj, json::array({ja["shape"], jb["shape"]}),
                                  ja["input"]["mesh_digest"].get<std::string>() + jb["input"]["mesh_digest"].get<std::string>());
      m["flow"] = flowj;
      m["a"] = ja;
      m["b"] = jb;
      m["outputs"] = {{"pair", "pair.csv"},
                      {"diagnostics_a", "diagnostics_a.csv"},
                      {"diagnostics_b", "diagnostics_b.csv"},
                      {"status", "status.json"},
                      {"certificates", "certificates.json"}};
      m["wall_clock"] = {{"started", started}, {"seconds", secs}};
      write_json(m, (dir / "manifest.json").string());
      out << dir.string() << ": " << to_string(res.a.status) << '/' << to_string(res.b.status)
          << " at t = " << res.a.t << ", monitorF1 min " << f1.lhs << " (" << to_string(f1.verdict) << ")\n";
      return 0;
    }

    if (*chk) {
      if (o_rho0->count()) copt.rho0 = crho0;
      if (o_area0->count()) copt.area0 = carea0;
      if (o_cd->count()) copt.d = cd;
      const std::vector<Certificate> certs = run_check(ctarget, copt);
      json arr = json::array();
      bool ok = true;
      for (const Certificate& c : certs) {
        arr.push_back(to_json(c));
        if (c.verdict == Verdict::fail) ok = false;
      }
      out << arr.dump(2) << '\n';
      if (!cout_path.empty()) write_json(arr, cout_path);
      return ok ? 0 : 1;
    }

    if (*prof) {
      std::ofstream file;
      if (!prof_out.empty()) {
        file.open(prof_out);
        if (!file) throw std::runtime_error("cannot write " + prof_out);
      }
      std::ostream& o = prof_out.empty() ? out : file;
      o << "r,V,sphere_area,profile_area,deficit\n";
      if (o_v0->count()) {
        if (!(v0 >= 0.0)) throw DomainError("v0 must be nonnegative");
        profile_row(o, sphere_radius_for_volume(v0), v0);
      } else {
        for (int k = 1; k <= 12; ++k) {
          const double r = 0.25 * k;
          profile_row(o, r, analytic::sphere_volume(r));
        }
      }
      return 0;
    }

    if (*rep) {
      const fs::path dir(rdir);
      if (!fs::is_directory(dir)) throw std::runtime_error(rdir + ": not a directory");
      run_report(dir, out);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hmcf::cli
