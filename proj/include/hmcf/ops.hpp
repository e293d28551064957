#pragma once

// Discrete geometry of hyperbolic triangle meshes.
//
// Mean curvature follows the average convention H = (k1 + k2)/2, positive on
// geodesic spheres with respect to the outward normal.

#include "hmcf/hgeom.hpp"
#include "hmcf/hmesh.hpp"

#include <array>
#include <vector>

namespace hmcf {

enum class Metric {
  hyperbolic,      // hyperboloid metric of H^3
  euclidean_ball,  // flat metric on the Poincare ball coordinates
};

const char* to_string(Metric m) noexcept;

struct FaceGeometry {
  double area = 0.0;
  std::array<double, 3> angles{};   // interior angle at each corner
  std::array<double, 3> lengths{};  // lengths[i] is the side opposite corner i
  bool flagged = false;             // degenerate triangle
};

/// Geodesic triangle in H^3. The area is pi minus the angle sum, evaluated in
/// a cancellation-free form.
FaceGeometry face_geometry(const HPoint& a, const HPoint& b, const HPoint& c);

double face_area(const TriMesh& mesh, int32_t f);
double total_area(const TriMesh& mesh);
int flagged_face_count(const TriMesh& mesh);

/// Unit outward normal of the face's totally geodesic plane. It is orthogonal
/// to all three corners, so it is a tangent vector at each of them.
Vec4 face_normal(const TriMesh& mesh, int32_t f);

/// Signed enclosed volume, positive for outward orientation.
double enclosed_volume(const TriMesh& mesh);

/// Number of times the surface winds around q (1 inside, 0 outside).
double winding_number(const TriMesh& mesh, const HPoint& q);

struct EdgeStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};
EdgeStats edge_stats(const TriMesh& mesh);
double max_incident_edge(const TriMesh& mesh, int32_t v);

struct CurvatureField {
  std::vector<Vec4> hvec;    // mean curvature vector, tangent at the vertex
  std::vector<double> H;     // <hvec, normal>
  std::vector<Vec4> normal;  // unit outward vertex normal
  std::vector<double> area;  // mixed vertex area
  double total_area = 0.0;
  int flagged = 0;

  size_t size() const noexcept { return H.size(); }
};

/// H-vector = (area gradient at v) / (2 A_v), with the gradient taken by
/// central differences along geodesics. A_v is the mixed Voronoi area.
/// Throws NumericalError naming the vertex if the gradient is not finite.
CurvatureField curvature_field(const TriMesh& mesh);

/// Sum H_v^2 A_v
double willmore_euclidean_style(const CurvatureField& cf);
double willmore_euclidean_style(const TriMesh& mesh);
/// Sum (H_v^2 - 1) A_v
double willmore_hyperbolic(const CurvatureField& cf);
double willmore_hyperbolic(const TriMesh& mesh);
/// Sum H_v A_v
double mean_curvature_integral(const CurvatureField& cf);

/// 2 pi minus the sum of corner angles at each vertex, in the chosen metric.
std::vector<double> angle_defects(const TriMesh& mesh, Metric metric);

/// Intrinsic Gauss curvature per vertex: defect / A_v plus the curvature of
/// the flat faces themselves (-1 for hyperbolic triangles, 0 for Euclidean
/// ones). Sum K_v A_v equals 2 pi chi in both metrics.
std::vector<double> gauss_curvature_intrinsic(const TriMesh& mesh, Metric metric);

/// Sum (H^2 + K + kappa) A_v where kappa is the ambient sectional curvature.
/// This is (Willmore energy) + 2 pi chi in either metric, which makes it the
/// same number for conformally related metrics.
double conformal_energy(const TriMesh& mesh, Metric metric);

/// Largest vertex-to-vertex distance.
double diameter(const TriMesh& mesh);

/// Largest distance between a vertex of a and a vertex of b.
double max_distance(const TriMesh& a, const TriMesh& b);

/// Upper bound on the distance between two surfaces: the closest vertex pair,
/// refined by geodesic midpoints and centroids of the faces around that pair.
double surface_distance(const TriMesh& a, const TriMesh& b);

}  // namespace hmcf
