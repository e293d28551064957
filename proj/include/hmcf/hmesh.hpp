#pragma once

// Closed oriented triangle meshes with vertices on the hyperboloid.

#include "hmcf/hgeom.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmcf {

using Face = std::array<int32_t, 3>;

struct Edge {
  int32_t a;  // a < b
  int32_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Adjacency derived once from the face list. Shared between meshes that only
/// differ in vertex positions.
class Topology {
 public:
  Topology(int32_t num_vertices, std::vector<Face> faces);

  int32_t num_vertices() const noexcept { return nv_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const int32_t> vertex_faces(int32_t v) const noexcept {
    return {vf_.data() + vf_off_[v], vf_.data() + vf_off_[v + 1]};
  }
  std::span<const int32_t> vertex_neighbors(int32_t v) const noexcept {
    return {nb_.data() + nb_off_[v], nb_.data() + nb_off_[v + 1]};
  }
  /// Number of faces on each undirected edge, same order as edges().
  const std::vector<int32_t>& edge_face_count() const noexcept { return edge_faces_; }
  /// Number of edges traversed in the same direction by two faces.
  int32_t orientation_conflicts() const noexcept { return conflicts_; }

 private:
  int32_t nv_;
  std::vector<Face> faces_;
  std::vector<int32_t> vf_off_, vf_;
  std::vector<int32_t> nb_off_, nb_;
  std::vector<Edge> edges_;
  std::vector<int32_t> edge_faces_;
  int32_t conflicts_ = 0;
};

/// Faces around a vertex, ordered counterclockwise as seen from outside.
struct VertexStar {
  int32_t vertex = -1;
  std::vector<int32_t> faces;
  std::vector<int32_t> ring;  // link vertices in the same order
  bool closed = false;
};

class TriMesh {
 public:
  TriMesh() = default;
  /// Throws DomainError if a face refers to a vertex index out of range.
  TriMesh(std::vector<HPoint> vertices, std::vector<Face> faces);

  /// Same connectivity, new positions.
  TriMesh with_vertices(std::vector<HPoint> vertices) const;
  /// Every face reversed.
  TriMesh reversed() const;
  TriMesh transformed(const Isometry& g) const;

  const std::vector<HPoint>& vertices() const noexcept { return verts_; }
  const HPoint& vertex(int32_t i) const noexcept { return verts_[i]; }
  const std::vector<Face>& faces() const noexcept { return topo_->faces(); }
  const std::vector<Edge>& edges() const noexcept { return topo_->edges(); }
  const Topology& topology() const noexcept { return *topo_; }

  int32_t num_vertices() const noexcept { return static_cast<int32_t>(verts_.size()); }
  int32_t num_faces() const noexcept { return static_cast<int32_t>(topo_->faces().size()); }
  int32_t num_edges() const noexcept { return static_cast<int32_t>(topo_->edges().size()); }

  VertexStar vertex_star(int32_t v) const;

 private:
  TriMesh(std::vector<HPoint> vertices, std::shared_ptr<const Topology> topo)
      : verts_(std::move(vertices)), topo_(std::move(topo)) {}

  std::vector<HPoint> verts_;
  std::shared_ptr<const Topology> topo_ = std::make_shared<Topology>(0, std::vector<Face>{});
};

int euler_characteristic(const TriMesh& mesh);

enum class ViolationKind {
  boundary_edge,
  nonmanifold_edge,
  inconsistent_orientation,
  degenerate_face,
  isolated_vertex,
  open_vertex_star,
  off_hyperboloid,
};

const char* to_string(ViolationKind k) noexcept;

struct Violation {
  ViolationKind kind;
  int32_t index;  // vertex, face or edge index depending on kind
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  int euler = 0;
  int32_t V = 0, E = 0, F = 0;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind k) const noexcept;
  std::string summary() const;
};

ValidationReport validate(const TriMesh& mesh);

// HMESH text format.

enum class HmeshErrorCode {
  io,
  malformed_header,
  malformed_line,
  count_mismatch,
  index_out_of_range,
  hyperboloid_violation,
};

class HmeshError : public std::runtime_error {
 public:
  HmeshError(HmeshErrorCode code, int line, const std::string& what);
  HmeshErrorCode code() const noexcept { return code_; }
  int line() const noexcept { return line_; }

 private:
  HmeshErrorCode code_;
  int line_;
};

/// Points drifting at most 1e-6 off the hyperboloid are re-projected.
inline constexpr double kHmeshLoadTol = 1e-6;

TriMesh read_hmesh(std::istream& in);
TriMesh read_hmesh(const std::string& path);
void write_hmesh(const TriMesh& mesh, std::ostream& out);
void write_hmesh(const TriMesh& mesh, const std::string& path);

/// 17 significant digits; parses back to the same double.
std::string format_double(double x);

}  // namespace hmcf
