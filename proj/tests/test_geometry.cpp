#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hypmax/errors.hpp"
#include "hypmax/geometry.hpp"
#include "hypmax/quadrature.hpp"

using namespace hypmax;

namespace {

Point random_point(std::mt19937_64& gen, int n, double max_radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, max_radius);
  std::vector<double> dir(n);
  for (double& v : dir) v = g(gen);
  return Point::from_polar(dir, u(gen));
}

Point xy(double x, double y) {
  const double c[] = {x, y};
  return Point::from_coords(c);
}

}  // namespace

TEST_CASE("distance matches the integrated line element") {
  // int_0^0.5 2/(1-t^2) dt, done by quadrature rather than the closed form
  const double oracle =
      integrate([](double t) { return 2.0 / (1.0 - t * t); }, 0.0, 0.5, {}, 20, 0.1);
  CHECK(distance(xy(0, 0), xy(0.5, 0)) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(oracle == doctest::Approx(1.098612).epsilon(1e-6));
  CHECK(distance(xy(0.3, -0.2), xy(0.3, -0.2)) == 0.0);
}

TEST_CASE("appendix formula is half the adopted distance from the origin") {
  for (double r : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(appendix_distance(xy(0, 0), xy(r, 0)) ==
          doctest::Approx(0.5 * distance(xy(0, 0), xy(r, 0))).epsilon(1e-12));
  }
}

TEST_CASE("point validation") {
  CHECK_THROWS_AS(xy(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(xy(0.8, 0.7), DomainError);
  const double one[] = {0.1};
  CHECK_THROWS_AS(Point::from_coords(one), UsageError);
  const double c3[] = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(distance(xy(0, 0), Point::from_coords(c3)), UsageError);
}

TEST_CASE("polar construction keeps radius and gap") {
  for (double r : {0.0, 1e-6, 0.7, 5.0, 25.0, 40.0}) {
    const Point p = Point::on_axis(3, r);
    CHECK(p.radius() == doctest::Approx(r).epsilon(1e-12));
    CHECK(distance(Point::origin(3), p) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 gen(11);
  for (int n = 2; n <= 5; ++n) {
    double worst_triangle = 0.0;
    double worst_symmetry = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const Point x = random_point(gen, n, 6.0);
      const Point y = random_point(gen, n, 6.0);
      const Point z = random_point(gen, n, 6.0);
      const double dxy = distance(x, y);
      CHECK(dxy >= 0.0);
      worst_symmetry = std::max(worst_symmetry, std::fabs(dxy - distance(y, x)));
      worst_triangle = std::max(worst_triangle, dxy - distance(x, z) - distance(z, y));
      CHECK(distance(x, x) <= 1e-12);
    }
    CHECK(worst_symmetry <= 1e-12);
    CHECK(worst_triangle <= 1e-9);
  }
}

TEST_CASE("ball volume closed forms") {
  CHECK(ball_volume(2, 0.0) == 0.0);
  CHECK(ball_volume(2, 1.0) ==
        doctest::Approx(2.0 * std::numbers::pi * (std::cosh(1.0) - 1.0)).epsilon(1e-12));
  CHECK(ball_volume(3, 1.0) ==
        doctest::Approx(std::numbers::pi * (std::sinh(2.0) - 2.0)).epsilon(1e-12));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(3.412276265).epsilon(1e-9));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(5.110932706).epsilon(1e-9));
  CHECK_THROWS_AS(ball_volume(1, 1.0), UsageError);
  CHECK_THROWS_AS(ball_volume(2, -1.0), DomainError);
}

TEST_CASE("ball volume agrees with direct quadrature across regimes") {
  for (int n = 2; n <= 5; ++n) {
    for (double r : {1e-3, 0.3, 0.999, 1.001, 2.5, 9.0, 29.0}) {
      const double direct =
          sphere_area(n) *
          integrate([n](double t) { return std::pow(std::sinh(t), n - 1); }, 0.0, r, {}, 30, 0.25);
      CHECK(ball_volume(n, r) == doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("log volume stays finite and tracks (n-1) r") {
  for (int n = 2; n <= 5; ++n) {
    CHECK(std::isfinite(log_ball_volume(n, 800.0)));
    double prev = INFINITY;
    for (double r = 10.0; r <= 40.0; r += 5.0) {
      const double diff =
          std::fabs((log_ball_volume(n, r + 5.0) - (n - 1) * (r + 5.0)) -
                    (log_ball_volume(n, r) - (n - 1) * r));
      CHECK(diff <= prev + 1e-12);
      prev = diff;
    }
    // Continuity across the quadrature/recurrence switch and the 30 threshold.
    for (double edge : {0.5, 1.0, 30.0}) {
      CHECK(log_ball_volume(n, edge + 1e-12) ==
            doctest::Approx(log_ball_volume(n, edge)).epsilon(1e-10));
    }
  }
}

TEST_CASE("law of cosines") {
  CHECK(law_of_cosines(2.0, 3.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(law_of_cosines(40.0, 35.0, 0.0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::cosh(law_of_cosines(1.5, 0.7, std::numbers::pi / 2)) ==
        doctest::Approx(std::cosh(1.5) * std::cosh(0.7)).epsilon(1e-13));
  CHECK(law_of_cosines(40.0, 40.0, std::numbers::pi) == doctest::Approx(80.0).epsilon(1e-12));
  CHECK_THROWS_AS(law_of_cosines(1.0, 1.0, 3.2), DomainError);
  CHECK_THROWS_AS(law_of_cosines(-1.0, 1.0, 1.0), DomainError);

  // Triangle built from actual points: vertex at origin, two rays at angle g.
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = 8.0 * u(gen);
    const double b = 8.0 * u(gen);
    const double g = std::numbers::pi * u(gen);
    const double d1[] = {1.0, 0.0};
    const double d2[] = {std::cos(g), std::sin(g)};
    const double c = distance(Point::from_polar(d1, a), Point::from_polar(d2, b));
    CHECK(law_of_cosines(a, b, g) == doctest::Approx(c).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("geodesic points") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 4; ++n) {
    for (int i = 0; i < 300; ++i) {
      const Point x = random_point(gen, n, 5.0);
      const Point y = random_point(gen, n, 5.0);
      const double d = distance(x, y);
      const GeodesicPoint start = geodesic_point(x, y, 0.0);
      CHECK(distance(start.point, x) <= 1e-9);
      CHECK(distance(geodesic_point(x, y, d).point, y) <= 1e-9);
      const double t = d * u(gen);
      const GeodesicPoint mid = geodesic_point(x, y, t);
      CHECK_FALSE(mid.extrapolated);
      CHECK(distance(x, mid.point) == doctest::Approx(t).epsilon(1e-9).scale(1.0));
      CHECK(distance(mid.point, y) == doctest::Approx(d - t).epsilon(1e-9).scale(1.0));
    }
  }
  const Point x = xy(0.1, 0.2);
  CHECK(geodesic_point(x, xy(0.0, 0.0), 2.0).extrapolated);
  CHECK_THROWS_AS(geodesic_point(x, x, 0.5), DegenerateGeodesicError);
}

TEST_CASE("mobius translation is an isometry carrying 0 to a") {
  std::mt19937_64 gen(3);
  for (int n = 2; n <= 5; ++n) {
    const Point o = Point::origin(n);
    const Point z = random_point(gen, n, 3.0);
    CHECK(distance(mobius_translate(o, z), z) <= 1e-12);
    const Point a = random_point(gen, n, 3.0);
    CHECK(distance(mobius_translate(a, o), a) <= 1e-12);
    CHECK(distance(mobius_translate(a.negated(), mobius_translate(a, z)), z) <= 1e-9);
  }
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 4;
    const Point a = random_point(gen, n, 6.0);
    const Point z1 = random_point(gen, n, 6.0);
    const Point z2 = random_point(gen, n, 6.0);
    const double before = distance(z1, z2);
    const double after = distance(mobius_translate(a, z1), mobius_translate(a, z2));
    worst = std::max(worst, std::fabs(before - after));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("mobius translation factors as inversion after reflection") {
  std::mt19937_64 gen(9);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 3;
    const Point a = random_point(gen, n, 3.0);
    const Point z = random_point(gen, n, 3.0);
    const OrthogonalMap reflect = OrthogonalMap::reflection(a.coords());
    const Point composed = boundary_orthogonal_inversion(a, reflect.apply(z));
    CHECK(distance(composed, mobius_translate(a, z)) <= 1e-8);
  }
}

TEST_CASE("orthogonal maps compose with translations as isometries") {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 4;
    std::vector<double> v1(n), v2(n);
    for (double& v : v1) v = g(gen);
    for (double& v : v2) v = g(gen);
    const OrthogonalMap q = OrthogonalMap::reflection(v1).then(OrthogonalMap::reflection(v2));
    CHECK(q.orthogonality_defect() <= 1e-12);
    const Point a = random_point(gen, n, 4.0);
    const Point z1 = random_point(gen, n, 4.0);
    const Point z2 = random_point(gen, n, 4.0);
    const double after = distance(q.apply(mobius_translate(a, z1)), q.apply(mobius_translate(a, z2)));
    CHECK(after == doctest::Approx(distance(z1, z2)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("intersection geometry") {
  SUBCASE("tangent balls") {
    const IntersectionOutcome out = intersection_geometry(2, 2.0, 3.0, 5.0);
    REQUIRE(out.relation == BallRelation::Overlapping);
    CHECK(out.geometry->rho0 == 0.0);
    CHECK(out.geometry->bound_log == 0.0);
  }
  SUBCASE("symmetric configuration gives the midpoint") {
    const double r = 1.7;
    const IntersectionOutcome out = intersection_geometry(3, r, r, r);
    REQUIRE(out.geometry);
    CHECK(out.geometry->rho0 == doctest::Approx(r / 2));
    CHECK(distance(out.geometry->m, Point::origin(3)) == doctest::Approx(r / 2).epsilon(1e-12));
    CHECK(distance(out.geometry->m, Point::on_axis(3, r)) == doctest::Approx(r / 2).epsilon(1e-12));
  }
  SUBCASE("classification") {
    CHECK(intersection_geometry(2, 5.0, 2.0, 2.5).relation == BallRelation::Contained);
    CHECK(intersection_geometry(2, 5.0, 2.0, 3.0).relation == BallRelation::Overlapping);
    CHECK(intersection_geometry(2, 2.0, 2.0, 4.5).relation == BallRelation::Disjoint);
    CHECK_THROWS_AS(intersection_geometry(2, -1.0, 2.0, 1.0), DomainError);
  }
  SUBCASE("m sits on the segment between general centers") {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 100; ++i) {
      const Point c1 = random_point(gen, 3, 4.0);
      const Point c2 = random_point(gen, 3, 4.0);
      const double d = distance(c1, c2);
      const double s = 0.6 * d + 0.5;
      const double r = 0.7 * d + 0.3;
      const IntersectionOutcome out = intersection_geometry(BallSpec{c1, s}, BallSpec{c2, r});
      if (out.relation != BallRelation::Overlapping) continue;
      const IntersectionGeometry& g = *out.geometry;
      CHECK(g.rho0 == doctest::Approx((r + s - d) / 2));
      CHECK(distance(c1, g.m) + distance(g.m, c2) == doctest::Approx(d).epsilon(1e-9));
      CHECK(distance(c1, g.m) + g.rho0 <= s + 1e-9);
      CHECK(distance(c2, g.m) + g.rho0 <= r + 1e-9);
    }
  }
}
