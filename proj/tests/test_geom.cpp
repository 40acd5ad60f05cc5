#include <doctest.h>

#include "domeforge/geom.hpp"
#include "domeforge/suites.hpp"

#include <cmath>
#include <numbers>

using namespace domeforge;

namespace {

const double kPi = std::numbers::pi;

MobiusMap random_mobius(suites::Rng& rng) {
  // Random normalized matrix away from degeneracy.
  while (true) {
    cplx a(rng.uniform(-2, 2), rng.uniform(-2, 2));
    cplx b(rng.uniform(-2, 2), rng.uniform(-2, 2));
    cplx c(rng.uniform(-2, 2), rng.uniform(-2, 2));
    cplx d(rng.uniform(-2, 2), rng.uniform(-2, 2));
    if (std::abs(a * d - b * c) > 0.3) return MobiusMap(a, b, c, d);
  }
}

ExtPoint random_point(suites::Rng& rng) {
  double z = rng.uniform(-1, 1);
  double phi = rng.uniform(0, 2 * kPi);
  double r = std::sqrt(std::max(0.0, 1 - z * z));
  return from_sphere({r * std::cos(phi), r * std::sin(phi), z});
}

bool same_circle(const GenCircle& a, const GenCircle& b, double tol = 1e-8) {
  SphereCircle sa = to_sphere_circle(a), sb = to_sphere_circle(b);
  double dot = sa.u.x * sb.u.x + sa.u.y * sb.u.y + sa.u.z * sb.u.z;
  double sgn = dot >= 0 ? 1.0 : -1.0;
  return std::abs(dot - sgn) < tol && std::abs(sa.h - sgn * sb.h) < tol;
}

}  // namespace

TEST_SUITE("geom") {

TEST_CASE("stereographic conventions") {
  SpherePoint south = to_sphere(ExtPoint(0, 0));
  CHECK(south.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(south.z == doctest::Approx(-1.0).epsilon(1e-12));
  SpherePoint north = to_sphere(ExtPoint::inf());
  CHECK(north.z == doctest::Approx(1.0).epsilon(1e-12));
  SpherePoint one = to_sphere(ExtPoint(1, 0));
  CHECK(one.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.z == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sphere round trip on 10^4 random points") {
  suites::Rng rng(11);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    ExtPoint p = i == 0 ? ExtPoint::inf() : random_point(rng);
    ExtPoint q = from_sphere(to_sphere(p));
    worst = std::max(worst, chordal(p, q));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("circle_through fixed examples") {
  GenCircle axis = circle_through(ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint::inf());
  CHECK(axis.kind == GenCircle::Kind::line);
  CHECK(std::abs(axis.offset) < 1e-12);
  CHECK(std::abs(std::abs(axis.normal.imag()) - 1.0) < 1e-12);

  GenCircle unit = circle_through(ExtPoint(1, 0), ExtPoint(0, 1), ExtPoint(-1, 0));
  CHECK(unit.kind == GenCircle::Kind::circle);
  CHECK(std::abs(unit.center) < 1e-10);
  CHECK(unit.radius == doctest::Approx(1.0).epsilon(1e-10));

  GenCircle c = circle_through(ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint(0, 1));
  CHECK(c.center.real() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c.center.imag() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(c.radius == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

  CHECK_THROWS_AS(circle_through(ExtPoint(0, 0), ExtPoint(0, 0), ExtPoint(1, 0)), Error);
}

TEST_CASE("circle_through spherical residual and Moebius naturality") {
  suites::Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    ExtPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    if (chordal(a, b) < 1e-3 || chordal(b, c) < 1e-3 || chordal(a, c) < 1e-3) continue;
    GenCircle circ = circle_through(a, b, c);
    SphereCircle sc = to_sphere_circle(circ);
    for (const ExtPoint& p : {a, b, c}) {
      SpherePoint v = to_sphere(p);
      CHECK(std::abs(v.x * sc.u.x + v.y * sc.u.y + v.z * sc.u.z - sc.h) < 1e-10);
    }
    MobiusMap m = random_mobius(rng);
    GenCircle lhs = circle_through(m(a), m(b), m(c));
    GenCircle rhs = m(circ);
    CHECK(same_circle(lhs, rhs));
  }
}

TEST_CASE("circle_angle fixed examples") {
  // Two lines through the origin at angle pi/3, both with the disk side below.
  GenCircle l1 = GenCircle::make_line(cplx(0, 1), 0, false);
  cplx n2 = std::exp(cplx(0, 5 * kPi / 6));
  GenCircle l2 = GenCircle::make_line(n2, 0, false);
  CHECK(circle_angle(l1, l2) == doctest::Approx(kPi / 3).epsilon(1e-10));

  GenCircle unit = GenCircle::make_circle(cplx(0, 0), 1.0, true);
  CHECK(circle_angle(unit, l1) == doctest::Approx(kPi / 2).epsilon(1e-10));

  GenCircle unit_at_1 = GenCircle::make_circle(cplx(1, 0), 1.0, true);
  CHECK(circle_angle(unit, unit_at_1) == doctest::Approx(kPi / 3).epsilon(1e-10));

  GenCircle far = GenCircle::make_circle(cplx(5, 0), 1.0, true);
  CHECK_THROWS_AS(circle_angle(unit, far), Error);
}

TEST_CASE("circle_angle is Moebius invariant") {
  suites::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    GenCircle c1 = GenCircle::make_circle(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                                          rng.uniform(0.5, 2.0), rng.u01() < 0.5);
    GenCircle c2 = GenCircle::make_circle(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                                          rng.uniform(0.5, 2.0), rng.u01() < 0.5);
    double ang;
    try {
      ang = circle_angle(c1, c2);
    } catch (const Error&) {
      continue;
    }
    MobiusMap m = random_mobius(rng);
    CHECK(circle_angle(m(c1), m(c2)) == doctest::Approx(ang).epsilon(1e-9));
  }
}

TEST_CASE("h3 distance examples and triangle inequality") {
  CHECK(h3_distance(H3Point(cplx(0, 0), 1), H3Point(cplx(0, 0), std::exp(1.0))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h3_distance(H3Point(cplx(0.3, -0.4), 0.7), H3Point(cplx(0.3, -0.4), 0.7)) ==
        doctest::Approx(0.0));
  CHECK(h3_distance(H3Point(cplx(0, 0), 1), H3Point(cplx(1, 0), 1)) ==
        doctest::Approx(std::acosh(1.5)).epsilon(1e-12));

  suites::Rng rng(14);
  for (int i = 0; i < 500; ++i) {
    H3Point p(cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)), std::exp(rng.uniform(-1.5, 1.5)));
    H3Point q(cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)), std::exp(rng.uniform(-1.5, 1.5)));
    H3Point r(cplx(rng.uniform(-2, 2), rng.uniform(-2, 2)), std::exp(rng.uniform(-1.5, 1.5)));
    CHECK(h3_distance(p, r) <= h3_distance(p, q) + h3_distance(q, r) + 1e-12);
    CHECK(h3_distance(p, q) == doctest::Approx(h3_distance(q, p)).epsilon(1e-13));
  }
}

TEST_CASE("horoball radius examples") {
  CHECK(horoball_radius(ExtPoint(0, 0), H3Point(cplx(0, 0), 1)) == doctest::Approx(0.5));
  CHECK(horoball_radius(ExtPoint(0, 0), H3Point(cplx(1, 0), 1)) == doctest::Approx(1.0));
  CHECK(horoball_radius(ExtPoint(0, 1), H3Point(cplx(0, 0), 1)) == doctest::Approx(1.0));
}

TEST_CASE("Moebius action and composition") {
  MobiusMap id = MobiusMap::identity();
  CHECK(chordal(id(ExtPoint(0.3, 0.7)), ExtPoint(0.3, 0.7)) < 1e-14);

  MobiusMap invz(0, 1, 1, 0);  // z -> 1/z
  CHECK(invz(ExtPoint(0, 0)).is_inf());
  MobiusMap cayley(1, cplx(0, -1), 1, cplx(0, 1));  // (z - i)/(z + i)
  CHECK(chordal(cayley(ExtPoint(0, 1)), ExtPoint(0, 0)) < 1e-14);

  suites::Rng rng(15);
  for (int i = 0; i < 300; ++i) {
    MobiusMap m = random_mobius(rng), n = random_mobius(rng);
    ExtPoint p = random_point(rng);
    CHECK(chordal((m * n)(p), m(n(p))) < 1e-10);
  }
}

TEST_CASE("Poincare extension fixes the boundary action") {
  suites::Rng rng(16);
  for (int i = 0; i < 100; ++i) {
    MobiusMap m = random_mobius(rng);
    // A point high above w maps near the vertical over m(w).
    cplx w(rng.uniform(-1, 1), rng.uniform(-1, 1));
    H3Point p(w, 1e-9);
    H3Point q = m(p);
    ExtPoint img = m(ExtPoint(w));
    if (img.is_inf()) continue;
    CHECK(std::abs(q.x - img.z) < 1e-5);
    // Isometry: distances preserved.
    H3Point a(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)), std::exp(rng.uniform(-1, 1)));
    H3Point b(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)), std::exp(rng.uniform(-1, 1)));
    CHECK(h3_distance(m(a), m(b)) == doctest::Approx(h3_distance(a, b)).epsilon(1e-10));
  }
}

TEST_CASE("h3 distance to geodesic") {
  // Vertical axis: sinh d = |x| / t.
  CHECK(h3_dist_to_geodesic(H3Point(cplx(1, 0), 1), ExtPoint(0, 0), ExtPoint::inf()) ==
        doctest::Approx(std::asinh(1.0)).epsilon(1e-12));
  // Point on the geodesic itself.
  CHECK(h3_dist_to_geodesic(H3Point(cplx(0, 0), 1), ExtPoint(-1, 0), ExtPoint(1, 0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

}  // TEST_SUITE
