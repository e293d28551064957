#pragma once

// Closed forms for geodesic spheres under the flow and the isoperimetric profile.

namespace hmcf::analytic {

/// ln cosh r0
double extinction_time(double r0);

/// arccosh(e^{-t} cosh r0). Throws DomainError("extinct") for t >= ln cosh r0.
double sphere_radius(double r0, double t);

/// 4 pi sinh^2 r
double sphere_area(double r);
/// pi sinh 2r - 2 pi r
double sphere_volume(double r);
/// Willmore energy of any geodesic sphere: 4 pi.
double sphere_willmore_bar(double r);
/// Radius of the geodesic sphere with the given area.
double sphere_radius_for_area(double a);

/// (1/2) int_0^a sqrt(x / (c + x)) dx, absolute error below 1e-10.
double iso_profile_integral(double a, double c);

/// Area of the geodesic sphere enclosing volume v0: the root a of
/// iso_profile_integral(a, 4 pi) = v0.
double iso_profile_area(double v0);

/// (1/2) int_0^{2 pi} [sqrt(x/(4 pi + x)) - sqrt(x/(c0 + x))] dx. Requires c0 > 4 pi.
double torus_deficit_constant(double c0);

/// Default value of the torus Willmore constant c0 = 2 pi^2.
double torus_willmore_constant();

}  // namespace hmcf::analytic
