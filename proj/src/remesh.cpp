#include "hmcf/remesh.hpp"

#include "hmcf/errors.hpp"
#include "hmcf/ops.hpp"

#include <algorithm>

namespace hmcf {

namespace {

Vec3 klein_normal(const Vec3& a, const Vec3& b, const Vec3& c) { return (b - a).cross(c - a); }

bool has_vertex(const Face& f, int32_t v) { return f[0] == v || f[1] == v || f[2] == v; }

}  // namespace

TriMesh collapse_short_edges(const TriMesh& mesh, double ratio, int* collapsed) {
  if (!(ratio > 0.0)) throw DomainError("collapse_short_edges: ratio must be positive");
  const int32_t nv = mesh.num_vertices();
  std::vector<HPoint> pos = mesh.vertices();
  std::vector<Face> faces = mesh.faces();
  std::vector<bool> face_alive(faces.size(), true), vert_alive(nv, true);
  std::vector<std::vector<int32_t>> vf(nv);
  for (int32_t f = 0; f < static_cast<int32_t>(faces.size()); ++f)
    for (int32_t v : faces[f]) vf[v].push_back(f);

  const double thresh = ratio * edge_stats(mesh).mean;
  std::vector<std::pair<double, Edge>> cand;
  for (const Edge& e : mesh.edges()) {
    const double l = hdist(pos[e.a], pos[e.b]);
    if (l < thresh) cand.push_back({l, e});
  }
  std::sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first < y.first : (x.second.a != y.second.a ? x.second.a < y.second.a : x.second.b < y.second.b);
  });

  auto neighbors = [&](int32_t v) {
    std::vector<int32_t> n;
    for (int32_t f : vf[v])
      for (int32_t u : faces[f])
        if (u != v) n.push_back(u);
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    return n;
  };

  int32_t alive = nv;
  int count = 0;
  for (const auto& [len, e] : cand) {
    if (alive <= 4) break;
    const int32_t a = e.a, b = e.b;
    if (!vert_alive[a] || !vert_alive[b]) continue;
    const auto na = neighbors(a), nb = neighbors(b);
    if (!std::binary_search(na.begin(), na.end(), b)) continue;
    if (hdist(pos[a], pos[b]) >= thresh) continue;
    std::vector<int32_t> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));
    if (common.size() != 2) continue;  // link condition

    const HPoint m = HPoint::project(pos[a].coords() + pos[b].coords());
    const Vec3 km = to_klein(m);
    bool flips = false;
    for (int32_t v : {a, b}) {
      for (int32_t f : vf[v]) {
        if (has_vertex(faces[f], a) && has_vertex(faces[f], b)) continue;
        Vec3 before[3], after[3];
        for (int k = 0; k < 3; ++k) {
          before[k] = to_klein(pos[faces[f][k]]);
          after[k] = faces[f][k] == v ? km : before[k];
        }
        if (klein_normal(before[0], before[1], before[2]).dot(klein_normal(after[0], after[1], after[2])) <= 0.0) {
          flips = true;
          break;
        }
      }
      if (flips) break;
    }
    if (flips) continue;

    pos[a] = m;
    for (int32_t f : vf[b]) {
      if (has_vertex(faces[f], a)) {
        face_alive[f] = false;
        continue;
      }
      for (int32_t& x : faces[f])
        if (x == b) x = a;
      vf[a].push_back(f);
    }
    vf[a].erase(std::remove_if(vf[a].begin(), vf[a].end(), [&](int32_t f) { return !face_alive[f]; }), vf[a].end());
    for (int32_t c : common)
      vf[c].erase(std::remove_if(vf[c].begin(), vf[c].end(), [&](int32_t f) { return !face_alive[f]; }), vf[c].end());
    vf[b].clear();
    vert_alive[b] = false;
    --alive;
    ++count;
  }

  if (collapsed) *collapsed = count;
  if (count == 0) return mesh;
  std::vector<int32_t> remap(nv, -1);
  std::vector<HPoint> out_pos;
  for (int32_t v = 0; v < nv; ++v)
    if (vert_alive[v]) {
      remap[v] = static_cast<int32_t>(out_pos.size());
      out_pos.push_back(pos[v]);
    }
  std::vector<Face> out_faces;
  for (size_t f = 0; f < faces.size(); ++f)
    if (face_alive[f]) out_faces.push_back({remap[faces[f][0]], remap[faces[f][1]], remap[faces[f][2]]});
  return TriMesh(std::move(out_pos), std::move(out_faces));
}

}  // namespace hmcf
