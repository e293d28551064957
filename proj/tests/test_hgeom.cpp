#include <doctest.h>

#include "hmcf/errors.hpp"
#include "hmcf/hgeom.hpp"

#include <random>

using namespace hmcf;

namespace {

HPoint random_point(std::mt19937_64& rng, double max_r = 3.0) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, max_r);
  Vec3 d(n(rng), n(rng), n(rng));
  d.normalize();
  return exp_map(HPoint::origin(), Vec4(0.0, d[0], d[1], d[2]) * u(rng));
}

// Uniformly random direction, length uniform in [0, max_len].
Vec4 random_tangent(std::mt19937_64& rng, const HPoint& p, double max_len = 3.0) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, max_len);
  const auto f = tangent_frame(p);
  const Vec3 d = Vec3(n(rng), n(rng), n(rng)).normalized();
  return (d[0] * f[0] + d[1] * f[1] + d[2] * f[2]) * u(rng);
}

}  // namespace

TEST_CASE("minkowski inner product") {
  CHECK(minkowski_inner(Vec4(1, 0, 0, 0), Vec4(1, 0, 0, 0)) == -1.0);
  CHECK(minkowski_inner(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0)) == 0.0);
  CHECK(minkowski_inner(Vec4(std::cosh(1.0), std::sinh(1.0), 0, 0), Vec4(1, 0, 0, 0)) ==
        doctest::Approx(-1.543081).epsilon(1e-6));
}

TEST_CASE("hdist examples") {
  const HPoint o = HPoint::origin();
  CHECK(hdist(o, o) == 0.0);
  const HPoint q = HPoint::from_coords(Vec4(std::cosh(1.5), std::sinh(1.5), 0, 0));
  CHECK(hdist(o, q) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(hdist(q, o) == hdist(o, q));
}

TEST_CASE("hdist equals the arc length of the geodesic path") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const HPoint p = random_point(rng), q = random_point(rng);
    const HTangent v = log_map(p, q);
    const int n = 100000;
    double len = 0.0;
    Vec4 prev = p.coords();
    for (int i = 1; i <= n; ++i) {
      const Vec4 x = exp_map(p, v.v * (static_cast<double>(i) / n)).coords();
      len += minkowski_norm(x - prev);
      prev = x;
    }
    CHECK(std::abs(len - hdist(p, q)) < 1e-8);
  }
}

TEST_CASE("hdist clamps roundoff below one and rejects larger violations") {
  const HPoint o = HPoint::origin();
  const HPoint near = HPoint::unchecked(Vec4(1.0 - 5e-10, 0, 0, 0));
  CHECK(hdist(o, near) == 0.0);
  const HPoint bad = HPoint::unchecked(Vec4(1.0 - 1e-6, 0, 0, 0));
  CHECK_THROWS_AS(hdist(o, bad), DomainError);
}

TEST_CASE("hdist triangle inequality on random triples") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20000; ++k) {
    const HPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    REQUIRE(hdist(a, c) <= hdist(a, b) + hdist(b, c) + 1e-9);
  }
}

TEST_CASE("exp_map examples") {
  const HPoint o = HPoint::origin();
  CHECK(exp_map(o, Vec4::Zero()) == o);
  const double r = 0.8;
  const HPoint q = exp_map(o, Vec4(0, r, 0, 0));
  CHECK(q[0] == doctest::Approx(std::cosh(r)).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(std::sinh(r)).epsilon(1e-15));
  CHECK(q[2] == 0.0);
  CHECK(q[3] == 0.0);
}

TEST_CASE("exp_map moves by the tangent length and stays on the hyperboloid") {
  std::mt19937_64 rng(3);
  double worst_dist = 0.0, worst_constraint = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const HPoint p = random_point(rng, 2.0);
    const Vec4 v = random_tangent(rng, p);
    const HPoint q = exp_map(p, v);
    worst_constraint = std::max(worst_constraint, q.constraint_violation());
    if (k % 100 == 0) worst_dist = std::max(worst_dist, std::abs(hdist(p, q) - minkowski_norm(v)));
  }
  CHECK(worst_constraint < 1e-9);
  CHECK(worst_dist < 1e-10);
}

TEST_CASE("log_map inverts exp_map") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 1000; ++k) {
    const HPoint p = random_point(rng), q = random_point(rng);
    const HTangent v = log_map(p, q);
    CHECK(v.tangency_error() < 1e-9);
    CHECK(v.norm() == doctest::Approx(hdist(p, q)).epsilon(1e-10));
    CHECK(hdist(exp_map(v), q) < 1e-7);
  }
}

TEST_CASE("project_tangent") {
  std::mt19937_64 rng(9);
  const HPoint p = random_point(rng);
  CHECK(project_tangent(p, p.coords()).v.norm() < 1e-12);
  const Vec4 v = random_tangent(rng, p);
  CHECK((project_tangent(p, v).v - v).norm() < 1e-12 * (1.0 + v.norm()));
  for (int k = 0; k < 1000; ++k) {
    const HPoint q = random_point(rng);
    std::normal_distribution<double> n;
    const Vec4 w(n(rng), n(rng), n(rng), n(rng));
    const HTangent t = project_tangent(q, w);
    CHECK(std::abs(minkowski_inner(t.v, q.coords())) < 1e-12 * (1.0 + w.norm()) * q.coords().squaredNorm());
    CHECK((project_tangent(q, t.v).v - t.v).norm() < 1e-12 * (1.0 + t.v.norm()) * q.coords().squaredNorm());
  }
}

TEST_CASE("klein chart") {
  CHECK(to_klein(HPoint::origin()).norm() == 0.0);
  const HPoint q = HPoint::from_coords(Vec4(std::cosh(1.0), std::sinh(1.0), 0, 0));
  CHECK(to_klein(q)[0] == doctest::Approx(0.761594).epsilon(1e-6));
  CHECK(to_klein(q)[1] == 0.0);
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const HPoint p = random_point(rng);
    worst = std::max(worst, (from_klein(to_klein(p)).coords() - p.coords()).norm() / p[0]);
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(from_klein(Vec3(1.0, 0, 0)), DomainError);
  CHECK_THROWS_AS(from_klein(Vec3(0, 0, 1.0 - 1e-13)), DomainError);
}

TEST_CASE("poincare chart") {
  CHECK(to_poincare(HPoint::origin()).norm() == 0.0);
  const HPoint q = HPoint::from_coords(Vec4(std::cosh(1.0), std::sinh(1.0), 0, 0));
  CHECK(to_poincare(q)[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-14));
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const HPoint p = random_point(rng);
    worst = std::max(worst, (from_poincare(to_poincare(p)).coords() - p.coords()).norm() / p[0]);
  }
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(from_poincare(Vec3(0, 1.0, 0)), DomainError);
}

TEST_CASE("HPoint construction checks the constraint") {
  CHECK_THROWS_AS(HPoint::from_coords(Vec4(1.0, 0.1, 0, 0)), DomainError);
  CHECK_THROWS_AS(HPoint::from_coords(Vec4(-1.0, 0, 0, 0)), DomainError);
  const HPoint p = HPoint::project(Vec4(2.0, 0.5, 0.1, 0.0));
  CHECK(p.constraint_violation() < 1e-14);
}

TEST_CASE("isometries preserve distance") {
  std::mt19937_64 rng(19);
  const Isometry g = Isometry::boost(Vec3(1, 2, 3).normalized(), 1.7) *
                     Isometry::rotation(Eigen::AngleAxisd(0.9, Vec3(0, 1, 1).normalized()).toRotationMatrix());
  for (int k = 0; k < 200; ++k) {
    const HPoint a = random_point(rng), b = random_point(rng);
    CHECK(hdist(g.apply(a), g.apply(b)) == doctest::Approx(hdist(a, b)).epsilon(1e-9));
    CHECK(hdist(g.inverse().apply(g.apply(a)), a) < 1e-7);
  }
  const HPoint c = random_point(rng);
  CHECK(hdist(Isometry::translation_to(c).apply(HPoint::origin()), c) < 1e-7);
}

TEST_CASE("tangent frame is orthonormal") {
  std::mt19937_64 rng(23);
  const HPoint p = random_point(rng);
  const auto f = tangent_frame(p);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(minkowski_inner(f[i], p.coords())) < 1e-12);
    for (int j = 0; j < 3; ++j) CHECK(minkowski_inner(f[i], f[j]) == doctest::Approx(i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("geodesic point interpolates distance") {
  std::mt19937_64 rng(29);
  const HPoint a = random_point(rng), b = random_point(rng);
  const HPoint m = geodesic_point(a, b, 0.25);
  CHECK(hdist(a, m) == doctest::Approx(0.25 * hdist(a, b)).epsilon(1e-9));
  CHECK(hdist(m, b) == doctest::Approx(0.75 * hdist(a, b)).epsilon(1e-9));
}
