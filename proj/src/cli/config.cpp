#include "internal.hpp"

#include "hmcf/digest.hpp"
#include "hmcf/errors.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

namespace hmcf::cli {

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

json to_json(const FlowConfig& c) {
  json j;
  j["cfl"] = c.cfl;
  j["dt_min"] = c.dt_min;
  j["h_max_abs"] = c.h_max_abs;
  j["max_steps"] = c.max_steps;
  j["record_every"] = c.record_every;
  j["tangential"] = c.tangential;
  j["remesh"] = c.remesh ? json{{"mode", "collapse_short_edges"}, {"ratio", c.remesh_ratio}} : json{{"mode", "off"}};
  return j;
}

FlowConfig flow_config_from_json(const json& j, FlowConfig c) {
  if (!j.is_object()) throw DomainError("flow config must be a JSON object");
  take(j, "cfl", c.cfl);
  take(j, "dt_min", c.dt_min);
  take(j, "h_max_abs", c.h_max_abs);
  take(j, "max_steps", c.max_steps);
  take(j, "record_every", c.record_every);
  take(j, "tangential", c.tangential);
  if (j.contains("remesh")) {
    const json& r = j.at("remesh");
    std::string mode = "off";
    if (r.is_string()) mode = r.get<std::string>();
    else if (r.is_object()) take(r, "mode", mode);
    else throw DomainError("config field 'remesh' must be a string or object");
    if (mode == "off") c.remesh = false;
    else if (mode == "collapse_short_edges") c.remesh = true;
    else throw DomainError("unknown remesh mode '" + mode + "'");
    if (r.is_object()) take(r, "ratio", c.remesh_ratio);
  }
  c.check();
  return c;
}

json to_json(const ShapeSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["resolution"] = s.resolution;
  switch (s.kind) {
    case ShapeKind::geodesic_sphere:
      j["r"] = s.r;
      j["center"] = {s.center[0], s.center[1], s.center[2]};
      break;
    case ShapeKind::ellipsoidal:
      j["r"] = s.r;
      j["stretch"] = s.stretch;
      j["center"] = {s.center[0], s.center[1], s.center[2]};
      break;
    case ShapeKind::drilled_sphere_torus:
      j["epsilon"] = s.epsilon;
      break;
    case ShapeKind::dumbbell:
      j["d"] = s.d;
      j["epsilon"] = s.epsilon;
      break;
  }
  return j;
}

ShapeSpec shape_from_json(const json& j, ShapeSpec s) {
  if (!j.is_object()) throw DomainError("shape spec must be a JSON object");
  if (j.contains("kind")) s.kind = parse_shape_kind(j.at("kind").get<std::string>());
  take(j, "r", s.r);
  take(j, "stretch", s.stretch);
  take(j, "d", s.d);
  take(j, "epsilon", s.epsilon);
  take(j, "eps", s.epsilon);
  take(j, "resolution", s.resolution);
  if (j.contains("center")) {
    const auto c = j.at("center").get<std::vector<double>>();
    if (c.size() != 3) throw DomainError("shape center must have three components");
    s.center = Vec3(c[0], c[1], c[2]);
  }
  s.check();
  return s;
}

json to_json(const Certificate& c) {
  json j;
  j["name"] = c.name;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["relation"] = c.relation;
  j["margin"] = c.margin;
  j["tolerance"] = c.tolerance;
  j["verdict"] = to_string(c.verdict);
  j["inputs_digest"] = c.inputs_digest;
  if (!c.extras.empty()) {
    json e = json::object();
    for (const auto& [k, v] : c.extras) e[k] = v;
    j["extras"] = e;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const Axis& a) {
  auto pt = [](const HPoint& p) { return json{p[0], p[1], p[2], p[3]}; };
  return json{{"a", pt(a.a)}, {"b", pt(a.b)}};
}

Axis axis_from_json(const json& j) {
  auto pt = [](const json& v) {
    const auto c = v.get<std::vector<double>>();
    if (c.size() != 4) throw DomainError("axis points need four coordinates");
    return HPoint::from_coords(Vec4(c[0], c[1], c[2], c[3]), 1e-8);
  };
  return Axis{pt(j.at("a")), pt(j.at("b"))};
}

std::string config_digest(const json& flow, const json& shape, const std::string& mesh_digest) {
  Fnv1a h;
  h.add(flow.dump()).add(shape.dump()).add(mesh_digest);
  return h.hex();
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hmcf::cli
