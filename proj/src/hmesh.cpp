#include "hmcf/hmesh.hpp"

#include "hmcf/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hmcf {

Topology::Topology(int32_t num_vertices, std::vector<Face> faces) : nv_(num_vertices), faces_(std::move(faces)) {
  const auto nf = static_cast<int32_t>(faces_.size());
  for (int32_t f = 0; f < nf; ++f)
    for (int32_t v : faces_[f])
      if (v < 0 || v >= nv_)
        throw DomainError("face " + std::to_string(f) + " refers to vertex " + std::to_string(v) +
                          " outside [0, " + std::to_string(nv_) + ")");

  vf_off_.assign(nv_ + 1, 0);
  for (const Face& f : faces_)
    for (int32_t v : f) ++vf_off_[v + 1];
  for (int32_t v = 0; v < nv_; ++v) vf_off_[v + 1] += vf_off_[v];
  vf_.resize(vf_off_[nv_]);
  {
    std::vector<int32_t> fill(vf_off_.begin(), vf_off_.end() - 1);
    for (int32_t f = 0; f < nf; ++f)
      for (int32_t v : faces_[f]) vf_[fill[v]++] = f;
  }

  // Directed half-edges sorted by their undirected key.
  struct Half {
    int32_t a, b;
    bool forward;
  };
  std::vector<Half> halves;
  halves.reserve(3 * faces_.size());
  for (const Face& f : faces_) {
    for (int k = 0; k < 3; ++k) {
      const int32_t i = f[k], j = f[(k + 1) % 3];
      if (i == j) continue;
      halves.push_back({std::min(i, j), std::max(i, j), i < j});
    }
  }
  std::sort(halves.begin(), halves.end(), [](const Half& x, const Half& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  for (size_t s = 0; s < halves.size();) {
    size_t e = s;
    int fwd = 0;
    while (e < halves.size() && halves[e].a == halves[s].a && halves[e].b == halves[s].b) {
      fwd += halves[e].forward ? 1 : 0;
      ++e;
    }
    const int n = static_cast<int>(e - s);
    edges_.push_back({halves[s].a, halves[s].b});
    edge_faces_.push_back(n);
    if (n == 2 && fwd != 1) ++conflicts_;
    s = e;
  }

  nb_off_.assign(nv_ + 1, 0);
  for (const Edge& e : edges_) {
    ++nb_off_[e.a + 1];
    ++nb_off_[e.b + 1];
  }
  for (int32_t v = 0; v < nv_; ++v) nb_off_[v + 1] += nb_off_[v];
  nb_.resize(nb_off_[nv_]);
  std::vector<int32_t> fill(nb_off_.begin(), nb_off_.end() - 1);
  for (const Edge& e : edges_) {
    nb_[fill[e.a]++] = e.b;
    nb_[fill[e.b]++] = e.a;
  }
  for (int32_t v = 0; v < nv_; ++v) std::sort(nb_.begin() + nb_off_[v], nb_.begin() + nb_off_[v + 1]);
}

TriMesh::TriMesh(std::vector<HPoint> vertices, std::vector<Face> faces)
    : verts_(std::move(vertices)),
      topo_(std::make_shared<Topology>(static_cast<int32_t>(verts_.size()), std::move(faces))) {}

TriMesh TriMesh::with_vertices(std::vector<HPoint> vertices) const {
  if (vertices.size() != verts_.size()) throw DomainError("with_vertices: vertex count changed");
  return TriMesh(std::move(vertices), topo_);
}

TriMesh TriMesh::reversed() const {
  std::vector<Face> f = faces();
  for (Face& x : f) std::swap(x[1], x[2]);
  return TriMesh(verts_, std::move(f));
}

TriMesh TriMesh::transformed(const Isometry& g) const {
  std::vector<HPoint> out;
  out.reserve(verts_.size());
  for (const HPoint& p : verts_) out.push_back(g.apply(p));
  return TriMesh(std::move(out), topo_);
}

VertexStar TriMesh::vertex_star(int32_t v) const {
  VertexStar st;
  st.vertex = v;
  const auto inc = topo_->vertex_faces(v);
  if (inc.empty()) return st;

  // Each incident face (v, a, b) contributes the directed link edge a -> b.
  struct Link {
    int32_t face, a, b;
  };
  std::vector<Link> links;
  for (int32_t f : inc) {
    const Face& fc = faces()[f];
    int k = 0;
    while (fc[k] != v) ++k;
    links.push_back({f, fc[(k + 1) % 3], fc[(k + 2) % 3]});
  }
  std::vector<bool> used(links.size(), false);
  size_t cur = 0;
  used[0] = true;
  st.faces.push_back(links[0].face);
  st.ring.push_back(links[0].a);
  for (size_t n = 1; n < links.size(); ++n) {
    size_t next = links.size();
    for (size_t i = 0; i < links.size(); ++i)
      if (!used[i] && links[i].a == links[cur].b) {
        next = i;
        break;
      }
    if (next == links.size()) return st;
    used[next] = true;
    st.faces.push_back(links[next].face);
    st.ring.push_back(links[next].a);
    cur = next;
  }
  st.closed = links[cur].b == links[0].a;
  return st;
}

int euler_characteristic(const TriMesh& mesh) {
  return mesh.num_vertices() - mesh.num_edges() + mesh.num_faces();
}

const char* to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::boundary_edge: return "boundary edge";
    case ViolationKind::nonmanifold_edge: return "non-manifold edge";
    case ViolationKind::inconsistent_orientation: return "inconsistent orientation";
    case ViolationKind::degenerate_face: return "degenerate face";
    case ViolationKind::isolated_vertex: return "isolated vertex";
    case ViolationKind::open_vertex_star: return "open vertex star";
    case ViolationKind::off_hyperboloid: return "off hyperboloid";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind k) const noexcept {
  return std::any_of(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok (V=" + std::to_string(V) + " E=" + std::to_string(E) + " F=" + std::to_string(F) +
                   " chi=" + std::to_string(euler) + ")";
  std::ostringstream os;
  os << violations.size() << " violation(s):";
  const size_t shown = std::min<size_t>(violations.size(), 10);
  for (size_t i = 0; i < shown; ++i)
    os << "\n  " << to_string(violations[i].kind) << " #" << violations[i].index << ": " << violations[i].detail;
  if (shown < violations.size()) os << "\n  ...";
  return os.str();
}

ValidationReport validate(const TriMesh& mesh) {
  ValidationReport r;
  r.V = mesh.num_vertices();
  r.E = mesh.num_edges();
  r.F = mesh.num_faces();
  r.euler = euler_characteristic(mesh);
  auto add = [&r](ViolationKind k, int32_t i, std::string d) { r.violations.push_back({k, i, std::move(d)}); };

  for (int32_t i = 0; i < r.V; ++i) {
    const HPoint& p = mesh.vertex(i);
    if (!p.coords().allFinite() || p.constraint_violation() > kHyperboloidTol || p[0] < 1.0 - kHyperboloidTol)
      add(ViolationKind::off_hyperboloid, i, "|<p,p>+1| = " + std::to_string(p.constraint_violation()));
  }
  for (int32_t f = 0; f < r.F; ++f) {
    const Face& x = mesh.faces()[f];
    if (x[0] == x[1] || x[1] == x[2] || x[0] == x[2]) add(ViolationKind::degenerate_face, f, "repeated index");
  }
  const Topology& t = mesh.topology();
  const bool orientation_bad = t.orientation_conflicts() > 0;
  for (int32_t e = 0; e < r.E; ++e) {
    const int n = t.edge_face_count()[e];
    const std::string name = std::to_string(t.edges()[e].a) + "-" + std::to_string(t.edges()[e].b);
    if (n == 1) add(ViolationKind::boundary_edge, e, "edge " + name + " has one face");
    else if (n > 2) add(ViolationKind::nonmanifold_edge, e, "edge " + name + " has " + std::to_string(n) + " faces");
  }
  if (orientation_bad)
    add(ViolationKind::inconsistent_orientation, -1,
        std::to_string(t.orientation_conflicts()) + " edge(s) traversed twice in the same direction");
  bool edges_ok = !r.has(ViolationKind::boundary_edge) && !r.has(ViolationKind::nonmanifold_edge) &&
                  !orientation_bad && !r.has(ViolationKind::degenerate_face);
  for (int32_t v = 0; v < r.V; ++v) {
    if (t.vertex_faces(v).empty()) {
      add(ViolationKind::isolated_vertex, v, "no incident face");
      continue;
    }
    if (edges_ok && !mesh.vertex_star(v).closed) add(ViolationKind::open_vertex_star, v, "star is not a single disk");
  }
  return r;
}

HmeshError::HmeshError(HmeshErrorCode code, int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), code_(code), line_(line) {}

std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

template <class T>
bool parse_num(const std::string& s, T& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

TriMesh read_hmesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  // Next non-empty, non-comment line, split into tokens; empty at EOF.
  auto next = [&]() -> std::vector<std::string> {
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      auto tok = split_ws(line);
      if (!tok.empty()) return tok;
    }
    return {};
  };

  auto tok = next();
  if (tok.size() != 2 || tok[0] != "HMESH" || tok[1] != "1")
    throw HmeshError(HmeshErrorCode::malformed_header, lineno, "expected 'HMESH 1'");
  tok = next();
  long long nv = -1, nf = -1;
  if (tok.size() != 2 || !parse_num(tok[0], nv) || !parse_num(tok[1], nf) || nv < 0 || nf < 0)
    throw HmeshError(HmeshErrorCode::malformed_header, lineno, "expected '<V> <F>' counts");

  std::vector<HPoint> verts;
  verts.reserve(static_cast<size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    tok = next();
    if (tok.empty())
      throw HmeshError(HmeshErrorCode::count_mismatch, lineno,
                       "file ends after " + std::to_string(i) + " of " + std::to_string(nv) + " vertices");
    if (tok[0] != "v")
      throw HmeshError(HmeshErrorCode::count_mismatch, lineno,
                       "expected vertex " + std::to_string(i) + " of " + std::to_string(nv) + ", found '" + tok[0] + "'");
    Vec4 x;
    if (tok.size() != 5 || !parse_num(tok[1], x[0]) || !parse_num(tok[2], x[1]) || !parse_num(tok[3], x[2]) ||
        !parse_num(tok[4], x[3]) || !x.allFinite())
      throw HmeshError(HmeshErrorCode::malformed_line, lineno, "expected 'v x0 x1 x2 x3'");
    const double drift = std::abs(minkowski_inner(x, x) + 1.0);
    if (drift > kHmeshLoadTol || x[0] <= 0.0)
      throw HmeshError(HmeshErrorCode::hyperboloid_violation, lineno,
                       "vertex " + std::to_string(i) + " is off the hyperboloid by " + std::to_string(drift));
    verts.push_back(drift > kHyperboloidTol ? HPoint::project(x) : HPoint::unchecked(x));
  }

  std::vector<Face> faces;
  faces.reserve(static_cast<size_t>(nf));
  for (long long i = 0; i < nf; ++i) {
    tok = next();
    if (tok.empty())
      throw HmeshError(HmeshErrorCode::count_mismatch, lineno,
                       "file ends after " + std::to_string(i) + " of " + std::to_string(nf) + " faces");
    if (tok[0] != "f")
      throw HmeshError(HmeshErrorCode::count_mismatch, lineno,
                       "expected face " + std::to_string(i) + " of " + std::to_string(nf) + ", found '" + tok[0] + "'");
    Face f;
    if (tok.size() != 4 || !parse_num(tok[1], f[0]) || !parse_num(tok[2], f[1]) || !parse_num(tok[3], f[2]))
      throw HmeshError(HmeshErrorCode::malformed_line, lineno, "expected 'f i j k'");
    for (int32_t k : f)
      if (k < 0 || k >= nv)
        throw HmeshError(HmeshErrorCode::index_out_of_range, lineno,
                         "index " + std::to_string(k) + " outside [0, " + std::to_string(nv) + ")");
    faces.push_back(f);
  }
  tok = next();
  if (!tok.empty())
    throw HmeshError(HmeshErrorCode::count_mismatch, lineno, "unexpected '" + tok[0] + "' after the declared counts");
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh read_hmesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw HmeshError(HmeshErrorCode::io, 0, "cannot open " + path);
  return read_hmesh(in);
}

void write_hmesh(const TriMesh& mesh, std::ostream& out) {
  out << "HMESH 1\n" << mesh.num_vertices() << ' ' << mesh.num_faces() << '\n';
  for (const HPoint& p : mesh.vertices())
    out << "v " << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << ' '
        << format_double(p[3]) << '\n';
  for (const Face& f : mesh.faces()) out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_hmesh(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw HmeshError(HmeshErrorCode::io, 0, "cannot write " + path);
  write_hmesh(mesh, out);
  if (!out) throw HmeshError(HmeshErrorCode::io, 0, "write failed for " + path);
}

}  // namespace hmcf
