#include <doctest.h>

#include "domeforge/confmetric.hpp"
#include "domeforge/npr.hpp"
#include "domeforge/suites.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace domeforge;

namespace {

const double kPi = std::numbers::pi;

FiniteDomain three_punctures() {
  return FiniteDomain::create({ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint::inf()});
}

FiniteDomain square_domain() {
  return FiniteDomain::create({ExtPoint(1, 0), ExtPoint(0, 1), ExtPoint(-1, 0), ExtPoint(0, -1)});
}

FiniteDomain tetra_domain() {
  return FiniteDomain::create(
      {ExtPoint(0, 0), ExtPoint(1, 0), ExtPoint(std::cos(kPi / 3), std::sin(kPi / 3)),
       ExtPoint::inf()});
}

cplx sample_planar(const FiniteDomain& D, suites::Rng& rng, double box = 2.2) {
  for (int i = 0; i < 500; ++i) {
    cplx z(rng.uniform(-box, box), rng.uniform(-box, box));
    bool ok = true;
    for (const auto& x : D.points)
      if (!x.is_inf() && std::abs(z - x.z) < 1e-2) ok = false;
    if (ok) return z;
  }
  return cplx(0.37, 1.21);
}

}  // namespace

TEST_SUITE("npr") {

TEST_CASE("retraction fixed examples") {
  FiniteDomain tri = three_punctures();
  RetractionResult r = retract(tri, ExtPoint(0, 1));  // z = i
  CHECK(r.kind == RetractionResult::Support::edge);
  CHECK(r.h == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.foot_ambient.x) < 1e-9);
  CHECK(r.foot_ambient.t == doctest::Approx(1.0).epsilon(1e-9));
  const HullEdge& e = tri.hull.edges[r.support_id];
  bool zero_inf = (tri.points[e.v0].is_inf() && chordal(tri.points[e.v1], ExtPoint(0, 0)) < 1e-12) ||
                  (tri.points[e.v1].is_inf() && chordal(tri.points[e.v0], ExtPoint(0, 0)) < 1e-12);
  CHECK(zero_inf);

  FiniteDomain sq = square_domain();
  RetractionResult r2 = retract(sq, ExtPoint(0, 0));
  CHECK(r2.kind == RetractionResult::Support::face_interior);
  CHECK(r2.h == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r2.foot_ambient.x) < 1e-9);
  CHECK(r2.foot_ambient.t == doctest::Approx(1.0).epsilon(1e-9));

  // Face-interior feet follow the hemisphere tangency closed form.
  suites::Rng rng(61);
  FiniteDomain D = FiniteDomain::create(suites::gen_random_points(7, rng));
  int checked = 0;
  for (int i = 0; i < 60 && checked < 8; ++i) {
    cplx z = sample_planar(D, rng);
    RetractionResult rr = retract(D, ExtPoint(z));
    if (rr.kind != RetractionResult::Support::face_interior) continue;
    const GenCircle& c = D.hull.faces[rr.support_id].circle;
    if (c.kind != GenCircle::Kind::circle) continue;
    double d2 = std::norm(z - c.center);
    CHECK(rr.h ==
          doctest::Approx(std::abs(c.radius * c.radius - d2) / (2 * c.radius)).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 0);

  CHECK_THROWS_AS(retract(tri, ExtPoint(0, 0)), Error);
  CHECK_THROWS_AS(retract(tri, ExtPoint::inf()), Error);
}

TEST_CASE("retraction is the global minimizer of the horoball functional") {
  suites::Rng rng(62);
  for (int t = 0; t < 6; ++t) {
    FiniteDomain D = FiniteDomain::create(suites::gen_random_points(rng.uniform_int(4, 9), rng));
    for (int i = 0; i < 5; ++i) {
      cplx z = sample_planar(D, rng);
      RetractionResult r = retract(D, ExtPoint(z));
      double brute = oracle::brute_retract_h(D, z);
      CHECK(brute >= r.h - 1e-8);
      CHECK(brute <= r.h + 1e-8);
      // The foot itself realizes h.
      CHECK(horoball_radius(ExtPoint(z), r.foot_ambient) == doctest::Approx(r.h).epsilon(1e-10));
    }
  }
}

TEST_CASE("retraction continuity away from cell boundaries") {
  FiniteDomain D = tetra_domain();
  suites::Rng rng(63);
  for (int i = 0; i < 20; ++i) {
    cplx z = sample_planar(D, rng);
    RetractionResult a = retract(D, ExtPoint(z));
    RetractionResult b = retract(D, ExtPoint(z + cplx(1e-7, -1e-7)));
    CHECK(h3_distance(a.foot_ambient, b.foot_ambient) < 1e-4);
    CHECK(std::abs(a.h - b.h) < 1e-5);
  }
}

TEST_CASE("Thurston density examples and conformal naturality") {
  CHECK(thurston_density(three_punctures(), ExtPoint(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(thurston_density(square_domain(), ExtPoint(0, 0)) == doctest::Approx(2.0).epsilon(1e-12));

  suites::Rng rng(64);
  FiniteDomain D = FiniteDomain::create(suites::gen_random_points(6, rng));
  for (int i = 0; i < 10; ++i) {
    MobiusMap m(cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    if (std::abs(m.det()) < 0.4) continue;
    cplx z = sample_planar(D, rng);
    ExtPoint mz = m(ExtPoint(z));
    if (mz.is_inf() || std::abs(mz.z) > 50) continue;
    std::vector<ExtPoint> Xm;
    bool bad = false;
    for (const auto& p : D.points) {
      ExtPoint q = m(p);
      Xm.push_back(q);
      if (chordal(q, mz) < 1e-4) bad = true;
    }
    if (bad) continue;
    FiniteDomain Dm = FiniteDomain::create(Xm);
    double lhs = thurston_density(Dm, mz) * m.deriv_abs(z);
    double rhs = thurston_density(D, ExtPoint(z));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }

  // Far points go through the inversion chart.
  double far = thurston_density(D, ExtPoint(3e6, 2e6));
  CHECK(far > 0);
  CHECK(far < 1e-5);
}

TEST_CASE("cell decomposition structure and classification") {
  FiniteDomain tri = three_punctures();
  CellDecomposition c3 = cell_decomposition(tri);
  CHECK(c3.faces.size() == 2);
  CHECK(c3.bigons.size() == 3);
  for (const auto& b : c3.bigons) CHECK(b.theta == doctest::Approx(kPi).epsilon(1e-9));

  FiniteDomain tetra = tetra_domain();
  CellDecomposition c4 = cell_decomposition(tetra);
  CHECK(c4.faces.size() == 4);
  CHECK(c4.bigons.size() == 6);
  for (const auto& b : c4.bigons) CHECK(b.theta == doctest::Approx(2 * kPi / 3).epsilon(1e-9));

  // Sampled points land in exactly one cell, matching the retraction.
  suites::Rng rng(65);
  for (int i = 0; i < 1000; ++i) {
    cplx z = sample_planar(tetra, rng);
    int owners = 0;
    int face_owner = -1, bigon_owner = -1;
    for (const auto& f : c4.faces)
      if (in_face_cell(tetra, f.face, ExtPoint(z))) {
        ++owners;
        face_owner = f.face;
      }
    for (size_t b = 0; b < c4.bigons.size(); ++b)
      if (in_bigon(c4, static_cast<int>(b), ExtPoint(z))) {
        ++owners;
        bigon_owner = static_cast<int>(b);
      }
    CHECK(owners == 1);
    RetractionResult r = retract(tetra, ExtPoint(z));
    if (r.kind == RetractionResult::Support::face_interior)
      CHECK(face_owner == r.support_id);
    else
      CHECK((bigon_owner >= 0 && c4.bigons[bigon_owner].edge == r.support_id));
  }
}

TEST_CASE("densities agree with the decomposition") {
  FiniteDomain D = tetra_domain();
  CellDecomposition C = cell_decomposition(D);
  suites::Rng rng(66);
  int faces_checked = 0, bigons_checked = 0;
  for (int i = 0; i < 500 && (faces_checked < 30 || bigons_checked < 30); ++i) {
    cplx z = sample_planar(D, rng);
    double tau = thurston_density(D, ExtPoint(z));
    RetractionResult r = retract(D, ExtPoint(z));
    if (r.kind == RetractionResult::Support::face_interior) {
      CHECK(face_cell_density(D, r.support_id, ExtPoint(z)) ==
            doctest::Approx(tau).epsilon(1e-9));
      ++faces_checked;
    } else {
      int bid = -1;
      for (size_t b = 0; b < C.bigons.size(); ++b)
        if (C.bigons[b].edge == r.support_id) bid = static_cast<int>(b);
      REQUIRE(bid >= 0);
      CHECK(bigon_density(C, bid, ExtPoint(z)) == doctest::Approx(tau).epsilon(1e-9));
      ++bigons_checked;
    }
  }
  CHECK(faces_checked >= 30);
  CHECK(bigons_checked >= 30);
}

TEST_CASE("pullback: face segments are isometric") {
  FiniteDomain D = tetra_domain();
  DomePath p = shoot_geodesic(D.dome, {0, cplx(0.5, 1.0)}, 0.7, 0.4);
  REQUIRE(p.crossings.empty());
  PullbackResult pr = pullback_path(D, p);
  CHECK(pr.l_tau_structural == doctest::Approx(p.l_h).epsilon(1e-12));
  CHECK(pr.l_tau_quadrature == doctest::Approx(p.l_h).epsilon(1e-7));
  CHECK(pr.arcs.size() == 1);
}

TEST_CASE("pullback: one crossing adds exactly theta") {
  FiniteDomain D = tetra_domain();
  suites::Rng rng(67);
  for (int i = 0; i < 60; ++i) {
    DomePoint x{rng.uniform_int(0, 3), cplx(0.5, 1.0)};
    DomePath p = shoot_geodesic(D.dome, x, rng.uniform(0, 2 * kPi), 1.0);
    if (p.crossings.size() != 1) continue;
    PullbackResult pr = pullback_path(D, p);
    CHECK(pr.l_tau_structural ==
          doctest::Approx(p.l_h + p.crossings[0].theta).epsilon(1e-12));
    CHECK(std::abs(pr.l_tau_quadrature - pr.l_tau_structural) <
          1e-5 * pr.l_tau_structural);
    return;
  }
  FAIL("no single-crossing path found");
}

TEST_CASE("pullback: random transverse paths match the quadrature oracle") {
  suites::Rng rng(68);
  int done = 0;
  for (int t = 0; t < 3; ++t) {
    FiniteDomain D = FiniteDomain::create(suites::gen_random_points(rng.uniform_int(4, 8), rng));
    for (int i = 0; i < 6; ++i) {
      try {
        DomePoint x{rng.uniform_int(0, (int)D.dome.charts.size() - 1),
                    cplx(rng.uniform(0, 1), std::exp(rng.uniform(-0.5, 0.8)))};
        if (!D.dome.contains(x, -1e-9)) continue;
        DomePath p = shoot_geodesic(D.dome, x, rng.uniform(0, 2 * kPi), rng.uniform(0.5, 2.0));
        PullbackResult pr = pullback_path(D, p);
        CHECK(std::abs(pr.l_tau_quadrature - pr.l_tau_structural) <=
              1e-5 * std::max(1.0, pr.l_tau_structural));
        ++done;
      } catch (const Error&) {
        continue;
      }
    }
  }
  CHECK(done >= 10);
}

TEST_CASE("retraction is 1-Lipschitz onto the dome (Thurston lengths)") {
  FiniteDomain D = tetra_domain();
  suites::Rng rng(69);
  auto tau = [&](cplx z) { return thurston_density(D, ExtPoint(z)); };
  for (int i = 0; i < 10; ++i) {
    cplx z = sample_planar(D, rng);
    cplx w = sample_planar(D, rng);
    double len;
    try {
      len = confmetric::path_length(tau, {z, w}, 1e-9);
    } catch (const Error&) {
      continue;
    }
    RetractionResult rz = retract(D, ExtPoint(z));
    RetractionResult rw = retract(D, ExtPoint(w));
    GeodesicResult g = geodesic_distance(D.dome, rz.foot, rw.foot);
    CHECK(g.distance <= len + 1e-6);
  }
}

TEST_CASE("essential circles have Thurston length above 2 pi") {
  suites::Rng rng(70);
  std::vector<ExtPoint> X = suites::two_cluster_points(0.1, 4, rng);
  FiniteDomain D = FiniteDomain::create(X);
  auto tau = [&](cplx z) { return thurston_density(D, ExtPoint(z)); };
  std::vector<cplx> loop;
  const int n = 64;
  for (int i = 0; i <= n; ++i) loop.push_back(std::exp(cplx(0, 2 * kPi * i / n)));
  double len = confmetric::path_length(tau, loop, 1e-8);
  CHECK(len > 2 * kPi);
}

TEST_CASE("svg export") {
  FiniteDomain tri = three_punctures();
  CellDecomposition c3 = cell_decomposition(tri);
  std::string svg = svg_export(tri, c3);
  CHECK(svg.find("<?xml") == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  size_t count = 0;
  for (size_t pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1))
    ++count;
  CHECK(count == 5);  // 2 face cells + 3 bigons

  FiniteDomain sq = square_domain();
  std::string svg2 = svg_export(sq, cell_decomposition(sq));
  size_t count2 = 0;
  for (size_t pos = svg2.find("<path"); pos != std::string::npos;
       pos = svg2.find("<path", pos + 1))
    ++count2;
  CHECK(count2 == 6);  // 2 face cells + 4 bigons
  CHECK(svg2 == svg_export(sq, cell_decomposition(sq)));
}

}  // TEST_SUITE
