#include <doctest.h>

#include "hmcf/analytic.hpp"
#include "hmcf/errors.hpp"

#include <cmath>
#include <numbers>

using namespace hmcf;
using namespace hmcf::analytic;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sphere_radius") {
  CHECK(sphere_radius(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(extinction_time(1.0) == doctest::Approx(0.433781).epsilon(1e-6));
  const double T = extinction_time(1.0);
  CHECK(sphere_radius(1.0, T * (1.0 - 1e-12)) < 1e-5);
  CHECK_THROWS_AS(sphere_radius(1.0, T), DomainError);
  CHECK_THROWS_AS(sphere_radius(1.0, 1.0), DomainError);
}

TEST_CASE("sphere_radius solves dr/dt = -coth r") {
  const double h = 1e-6, t = 0.1;
  const double drdt = (sphere_radius(1.0, t + h) - sphere_radius(1.0, t - h)) / (2.0 * h);
  CHECK(std::abs(drdt + 1.0 / std::tanh(sphere_radius(1.0, t))) < 1e-6);
}

TEST_CASE("e^t cosh r(t) is conserved") {
  for (double r0 : {0.1, 0.5, 1.0, 2.0, 4.0})
    for (int k = 0; k < 50; ++k) {
      const double t = extinction_time(r0) * k / 50.0;
      CHECK(std::exp(t) * std::cosh(sphere_radius(r0, t)) == doctest::Approx(std::cosh(r0)).epsilon(1e-12));
    }
}

TEST_CASE("extinction time is accurate for tiny and huge radii") {
  CHECK(extinction_time(1e-8) == doctest::Approx(0.5e-16).epsilon(1e-10));
  CHECK(extinction_time(800.0) == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("sphere closed forms") {
  CHECK(sphere_area(0.0) == 0.0);
  CHECK(sphere_volume(0.0) == 0.0);
  CHECK(sphere_willmore_bar(0.0) == doctest::Approx(4.0 * kPi));
  CHECK(sphere_area(1.0) == doctest::Approx(17.3555).epsilon(1e-5));
  CHECK(sphere_volume(1.0) == doctest::Approx(kPi * std::sinh(2.0) - 2.0 * kPi).epsilon(1e-14));
  CHECK(sphere_volume(1.0) == doctest::Approx(5.1089).epsilon(1e-3));
  CHECK(sphere_willmore_bar(1.0) == doctest::Approx(4.0 * kPi));
  const double h = 1e-5;
  CHECK(std::abs((sphere_volume(1.0 + h) - sphere_volume(1.0 - h)) / (2.0 * h) - sphere_area(1.0)) < 1e-6);
  // the small-r series matches the closed form where both are accurate
  CHECK(sphere_volume(0.02) == doctest::Approx(kPi * std::sinh(0.04) - 2.0 * kPi * 0.02).epsilon(1e-9));
  CHECK(sphere_volume(1e-4) == doctest::Approx(4.0 / 3.0 * kPi * 1e-12).epsilon(1e-7));
  CHECK(sphere_radius_for_area(sphere_area(1.3)) == doctest::Approx(1.3).epsilon(1e-14));
}

TEST_CASE("iso_profile_integral") {
  CHECK(iso_profile_integral(0.0, 4.0 * kPi) == 0.0);
  for (double r : {0.5, 1.0, 2.0})
    CHECK(std::abs(iso_profile_integral(sphere_area(r), 4.0 * kPi) - sphere_volume(r)) < 1e-8);
  for (double a : {0.5, 5.0, 50.0}) CHECK(iso_profile_integral(a, 30.0) < iso_profile_integral(a, 20.0));
}

TEST_CASE("sphere profile identity on a dense grid") {
  double worst = 0.0;
  for (int k = 1; k <= 300; ++k) {
    const double r = 0.01 * k;
    worst = std::max(worst, std::abs(iso_profile_integral(sphere_area(r), 4.0 * kPi) - sphere_volume(r)) /
                                std::max(1.0, sphere_volume(r)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("iso_profile_integral is monotone in its upper limit") {
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double v = iso_profile_integral(0.37 * k, 4.0 * kPi);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("iso_profile_area") {
  CHECK(iso_profile_area(0.0) == 0.0);
  CHECK(std::abs(iso_profile_area(sphere_volume(1.0)) - sphere_area(1.0)) < 1e-7);
  double prev = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double a = iso_profile_area(0.3 * k);
    CHECK(a > prev);
    prev = a;
  }
  CHECK_THROWS_AS(iso_profile_area(-1.0), DomainError);
}

TEST_CASE("torus deficit constant") {
  CHECK(std::abs(torus_deficit_constant(4.0 * kPi + 1e-9)) < 1e-9);
  CHECK(torus_willmore_constant() == doctest::Approx(2.0 * kPi * kPi));
  // frozen regression value
  CHECK(torus_deficit_constant(2.0 * kPi * kPi) == doctest::Approx(0.2192537527311087).epsilon(1e-10));
  CHECK(torus_deficit_constant(2.0 * kPi * kPi) > 0.0);
  double prev = 0.0;
  for (double c0 : {13.0, 15.0, 20.0, 40.0, 100.0}) {
    const double c = torus_deficit_constant(c0);
    CHECK(c > prev);
    prev = c;
  }
  CHECK_THROWS_AS(torus_deficit_constant(4.0 * kPi), DomainError);
  CHECK_THROWS_AS(torus_deficit_constant(5.0), DomainError);
}
