#include "hmcf/analytic.hpp"

#include "hmcf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace hmcf::analytic {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-13;
}  // namespace

double extinction_time(double r0) {
  if (!(r0 > 0.0)) throw DomainError("extinction_time: r0 must be positive");
  // ln cosh r without overflow for large r
  return r0 + std::log1p(std::exp(-2.0 * r0)) - std::numbers::ln2;
}

double sphere_radius(double r0, double t) {
  if (!(r0 > 0.0) || !(t >= 0.0)) throw DomainError("sphere_radius: need r0 > 0 and t >= 0");
  if (t >= extinction_time(r0)) throw DomainError("extinct");
  return std::acosh(std::exp(-t) * std::cosh(r0));
}

double sphere_area(double r) {
  if (!(r >= 0.0)) throw DomainError("sphere_area: r must be nonnegative");
  const double s = std::sinh(r);
  return 4.0 * kPi * s * s;
}

double sphere_volume(double r) {
  if (!(r >= 0.0)) throw DomainError("sphere_volume: r must be nonnegative");
  if (r < 1e-2) {
    // pi (sinh 2r - 2r) = 4 pi (r^3/3 + r^5/15 + 2 r^7/315 + ...)
    const double r2 = r * r;
    return 4.0 * kPi * r * r2 * (1.0 / 3.0 + r2 * (1.0 / 15.0 + r2 * (2.0 / 315.0 + r2 / 2835.0)));
  }
  return kPi * (std::sinh(2.0 * r) - 2.0 * r);
}

double sphere_willmore_bar(double) { return 4.0 * kPi; }

double sphere_radius_for_area(double a) {
  if (!(a >= 0.0)) throw DomainError("sphere_radius_for_area: area must be nonnegative");
  return std::asinh(std::sqrt(a / (4.0 * kPi)));
}

double iso_profile_integral(double a, double c) {
  if (!(a >= 0.0) || !(c > 0.0)) throw DomainError("iso_profile_integral: need a >= 0 and c > 0");
  if (a == 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  // Near zero the integrand behaves like sqrt(x); x = u^2 removes the kink.
  const double split = std::min(a, c / 100.0);
  const double head = gauss_kronrod<double, 15>::integrate(
      [c](double u) { return 2.0 * u * u / std::sqrt(c + u * u); }, 0.0, std::sqrt(split), 15, kQuadTol);
  double tail = 0.0;
  if (a > split)
    tail = gauss_kronrod<double, 15>::integrate([c](double x) { return std::sqrt(x / (c + x)); }, split, a, 15,
                                                kQuadTol);
  return 0.5 * (head + tail);
}

double iso_profile_area(double v0) {
  if (!(v0 >= 0.0)) throw DomainError("iso_profile_area: v0 must be nonnegative");
  if (v0 == 0.0) return 0.0;
  const double c = 4.0 * kPi;
  auto f = [&](double a) { return iso_profile_integral(a, c) - v0; };
  // Bracket: the integrand tends to 1, so the integral exceeds (a - c)/2 for large a.
  double hi = std::max(1.0, 2.0 * v0 + c);
  while (f(hi) < 0.0) hi *= 2.0;
  const double tol = 1e-10 * std::max(1.0, hi);
  auto done = [tol](double lo, double up) { return up - lo <= tol; };
  const auto root = boost::math::tools::bisect(f, 0.0, hi, done);
  return 0.5 * (root.first + root.second);
}

double torus_deficit_constant(double c0) {
  const double c4 = 4.0 * kPi;
  if (!(c0 > c4)) throw DomainError("torus_deficit_constant: c0 must exceed 4 pi, got " + std::to_string(c0));
  return iso_profile_integral(2.0 * kPi, c4) - iso_profile_integral(2.0 * kPi, c0);
}

double torus_willmore_constant() { return 2.0 * kPi * kPi; }

}  // namespace hmcf::analytic
