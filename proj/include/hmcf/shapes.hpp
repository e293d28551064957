#pragma once

// Mesh generators. Surfaces of revolution are built in Fermi coordinates
// around the geodesic through the basepoint along x1:
//   X(s, rho, theta) = cosh(rho) (cosh s, sinh s, 0, 0) + sinh(rho) (0, 0, cos theta, sin theta)

#include "hmcf/flow.hpp"
#include "hmcf/hmesh.hpp"

#include <optional>
#include <string>

namespace hmcf {

enum class ShapeKind { geodesic_sphere, drilled_sphere_torus, dumbbell, ellipsoidal };

const char* to_string(ShapeKind k) noexcept;
/// Accepts the canonical names and the short forms sphere, torus, ellipsoid.
ShapeKind parse_shape_kind(const std::string& s);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::geodesic_sphere;
  double r = 1.0;          // sphere and ellipsoid radius
  double stretch = 1.0;    // ellipsoid
  double d = 8.0;          // dumbbell center separation
  double epsilon = 0.1;    // tube radius
  int resolution = 2562;   // target vertex count
  Vec3 center = Vec3::Zero();  // sphere and ellipsoid placement, as a tangent vector at the basepoint

  void check() const;
};

/// Point of H^3 in Fermi coordinates around the x1 axis.
HPoint fermi_point(double s, double rho, double theta);

/// Unit icosphere with 10 * 4^level + 2 vertices, faces counterclockwise from outside.
void unit_icosphere(int level, std::vector<Vec3>& dirs, std::vector<Face>& faces);
/// Smallest icosphere level reaching `resolution` vertices.
int icosphere_level(int resolution);

TriMesh gen_sphere(double r, const HPoint& center, int resolution);
TriMesh gen_ellipsoidal(double r, double stretch, int resolution, const HPoint& center = HPoint::origin());
TriMesh gen_drilled_torus(double epsilon, int resolution);
TriMesh gen_dumbbell(double d, double epsilon, int resolution);

TriMesh generate(const ShapeSpec& spec);

/// Bell centers of a dumbbell; empty for other kinds.
std::optional<Axis> shape_axis(const ShapeSpec& spec);

/// Axial position where a tube of radius eps meets a unit sphere, measured from
/// the sphere center: acosh(cosh 1 / cosh eps).
double tube_junction_offset(double eps);

/// Lateral area of the exposed dumbbell tube between the two bells.
double dumbbell_tube_area(double d, double eps);

/// 2 sphere_area(1) + dumbbell_tube_area(d, eps)
double dumbbell_reference_area(double d, double eps);

}  // namespace hmcf
