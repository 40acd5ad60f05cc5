#include <doctest.h>

#include "domeforge/hull.hpp"
#include "domeforge/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

using namespace domeforge;

namespace {

const double kPi = std::numbers::pi;

std::vector<ExtPoint> tetra_points() {
  return {ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint(std::cos(kPi / 3), std::sin(kPi / 3)),
          ExtPoint::inf()};
}

// Face cycles as canonical sets for combinatorial comparison.
std::set<std::set<int>> face_sets(const IdealPolyhedron& P) {
  std::set<std::set<int>> out;
  for (const auto& f : P.faces) out.insert(std::set<int>(f.vertices.begin(), f.vertices.end()));
  return out;
}

}  // namespace

TEST_SUITE("hull") {

TEST_CASE("doubled triangle {0,1,inf}") {
  IdealPolyhedron P = build_hull({ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint::inf()});
  CHECK(P.doubled);
  CHECK(P.faces.size() == 2);
  CHECK(P.edges.size() == 3);
  CHECK(P.faces[0].vertices == P.faces[1].vertices);  // identical mirror cycles
  for (const auto& e : P.edges) CHECK(e.theta == doctest::Approx(kPi));
  HullDiagnostics d = validate(P);
  for (double r : d.vertex_angle_residuals) CHECK(r < 1e-12);
}

TEST_CASE("doubled square {1,i,-1,-i}") {
  IdealPolyhedron P =
      build_hull({ExtPoint(1, 0), ExtPoint(0, 1), ExtPoint(-1, 0), ExtPoint(0, -1)});
  CHECK(P.doubled);
  CHECK(P.faces.size() == 2);
  CHECK(P.edges.size() == 4);
  for (const auto& e : P.edges) CHECK(e.theta == doctest::Approx(kPi));
  // Support circle is the unit circle.
  const GenCircle& c = P.faces[0].circle;
  REQUIRE(c.kind == GenCircle::Kind::circle);
  CHECK(std::abs(c.center) < 1e-10);
  CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("regular ideal tetrahedron") {
  IdealPolyhedron P = build_hull(tetra_points());
  CHECK(!P.doubled);
  CHECK(P.faces.size() == 4);
  CHECK(P.edges.size() == 6);
  for (const auto& e : P.edges)
    CHECK(e.theta == doctest::Approx(2 * kPi / 3).epsilon(1e-9));
  HullDiagnostics d = validate(P);
  CHECK(d.euler_ok);
  CHECK(d.theta_range_ok);
  for (double r : d.vertex_angle_residuals) CHECK(r < 1e-9);
  CHECK(d.total_angle_residual < 1e-9);
  CHECK(d.max_support_residual < 1e-10);
}

TEST_CASE("tetrahedron support circles avoid X") {
  IdealPolyhedron P = build_hull(tetra_points());
  // The face through (0, 1, inf) is supported by the real axis with the empty
  // side avoiding e^{i pi/3}.
  bool found = false;
  for (int f = 0; f < 4; ++f) {
    std::set<int> vs(P.faces[f].vertices.begin(), P.faces[f].vertices.end());
    if (vs != std::set<int>{0, 1, 3}) continue;
    found = true;
    GenCircle c = support_circle(P, f);
    REQUIRE(c.kind == GenCircle::Kind::line);
    CHECK(std::abs(c.offset) < 1e-10);
    CHECK(c.on_disk_side(ExtPoint(0.5, -1.0)));   // lower half-plane is empty
    CHECK(!c.on_disk_side(ExtPoint(0.5, 1.0)));
  }
  CHECK(found);
  // No point of X lies inside any face's open disk.
  for (const auto& f : P.faces)
    for (const auto& x : tetra_points()) CHECK(!f.circle.on_disk_side(x));
  CHECK_THROWS_AS(support_circle(P, 99), Error);
}

TEST_CASE("degenerate inputs") {
  CHECK_THROWS_AS(build_hull({ExtPoint(0, 0), ExtPoint(1, 0)}), Error);
  CHECK_THROWS_AS(build_hull({ExtPoint(0, 0), ExtPoint(0, 0), ExtPoint(1, 0)}), Error);
}

TEST_CASE("random hulls: vertex sums, Euler, support residuals") {
  suites::Rng rng(31);
  for (int t = 0; t < 25; ++t) {
    int n = rng.uniform_int(4, 12);
    std::vector<ExtPoint> X = suites::gen_random_points(n, rng);
    IdealPolyhedron P = build_hull(X);
    CHECK(!P.doubled);
    HullDiagnostics d = validate(P);
    CHECK(d.euler_ok);
    CHECK(d.theta_range_ok);
    for (double r : d.vertex_angle_residuals) CHECK(r < 1e-8);
    CHECK(d.total_angle_residual < 1e-7);
    CHECK(d.max_support_residual < 1e-9);
    // Every input point is a hull vertex of some face.
    std::set<int> used;
    for (const auto& f : P.faces) used.insert(f.vertices.begin(), f.vertices.end());
    CHECK(static_cast<int>(used.size()) == n);
  }
}

TEST_CASE("Moebius naturality of combinatorics and dihedral angles") {
  suites::Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    int n = rng.uniform_int(4, 9);
    std::vector<ExtPoint> X = suites::gen_random_points(n, rng);
    IdealPolyhedron P = build_hull(X);

    MobiusMap m(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    if (std::abs(m.det()) < 0.3) continue;
    std::vector<ExtPoint> Xm(X.size());
    bool collision = false;
    for (size_t i = 0; i < X.size(); ++i) {
      Xm[i] = m(X[i]);
      for (size_t j = 0; j < i; ++j)
        if (chordal(Xm[i], Xm[j]) < 1e-5) collision = true;
    }
    if (collision) continue;
    IdealPolyhedron Q = build_hull(Xm);
    CHECK(face_sets(P) == face_sets(Q));
    for (const auto& e : P.edges) {
      const HullEdge* eq = Q.find_edge(e.v0, e.v1);
      REQUIRE(eq != nullptr);
      CHECK(eq->theta == doctest::Approx(e.theta).epsilon(1e-8));
    }
  }
}

TEST_CASE("locality: a point inside one face's disk preserves the other faces") {
  suites::Rng rng(33);
  std::vector<ExtPoint> X = suites::gen_random_points(7, rng);
  IdealPolyhedron P = build_hull(X);
  // Pick a point lying in exactly one face's open disk (adjacent disks
  // overlap along bigons, where two faces would be affected).
  int target = -1;
  cplx inside;
  for (int f = 0; f < static_cast<int>(P.faces.size()) && target < 0; ++f) {
    const GenCircle& c = P.faces[f].circle;
    if (c.kind != GenCircle::Kind::circle || !c.disk_is_interior) continue;
    for (int trial = 0; trial < 64 && target < 0; ++trial) {
      cplx cand = c.center + (0.3 * c.radius * trial / 64.0) *
                                std::exp(cplx(0, 2 * kPi * trial / 7.0));
      int owners = 0;
      for (const auto& g : P.faces)
        if (g.circle.on_disk_side(ExtPoint(cand))) ++owners;
      if (owners == 1 && c.on_disk_side(ExtPoint(cand))) {
        target = f;
        inside = cand;
      }
    }
  }
  REQUIRE(target >= 0);
  std::vector<ExtPoint> X2 = X;
  X2.push_back(ExtPoint(inside));
  IdealPolyhedron Q = build_hull(X2);
  std::set<std::set<int>> before = face_sets(P);
  std::set<std::set<int>> after = face_sets(Q);
  std::set<int> replaced(P.faces[target].vertices.begin(), P.faces[target].vertices.end());
  for (const auto& fs : before) {
    if (fs == replaced) continue;
    CHECK(after.count(fs) == 1);
  }
}

TEST_CASE("aligned annulus placement exercises the coplanar merge") {
  std::vector<ExtPoint> X = suites::annulus_points(2.0, 6, 0.0);
  IdealPolyhedron P = build_hull(X);
  // Two hexagonal caps plus 6 lateral quadrilaterals.
  CHECK(P.faces.size() == 8);
  int quads = 0, hexes = 0;
  for (const auto& f : P.faces) {
    if (f.vertices.size() == 4) ++quads;
    if (f.vertices.size() == 6) ++hexes;
  }
  CHECK(quads == 6);
  CHECK(hexes == 2);
  HullDiagnostics d = validate(P);
  for (double r : d.vertex_angle_residuals) CHECK(r < 1e-8);
}

TEST_CASE("twisted annulus placement gives the antiprism") {
  std::vector<ExtPoint> X = suites::annulus_points(2.0, 8, kPi / 8);
  IdealPolyhedron P = build_hull(X);
  CHECK(P.faces.size() == 2 + 16);
  int tris = 0, octs = 0;
  for (const auto& f : P.faces) {
    if (f.vertices.size() == 3) ++tris;
    if (f.vertices.size() == 8) ++octs;
  }
  CHECK(tris == 16);
  CHECK(octs == 2);
}

}  // TEST_SUITE
