#include <doctest.h>

#include "domeforge/suites.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace domeforge;
namespace st = domeforge::suites;

namespace {
const double kPi = std::numbers::pi;
}

TEST_SUITE("suites") {

TEST_CASE("deterministic reports, independent of the worker count") {
  st::SuiteConfig cfg;
  cfg.suite = "vertex-sums";
  cfg.seed = 7;
  cfg.params = io::json{{"configs", 6}};

  setenv("DOMEFORGE_THREADS", "1", 1);
  std::string once = st::run_suite(cfg).to_json().dump();
  std::string twice = st::run_suite(cfg).to_json().dump();
  CHECK(once == twice);

  setenv("DOMEFORGE_THREADS", "2", 1);
  std::string parallel = st::run_suite(cfg).to_json().dump();
  unsetenv("DOMEFORGE_THREADS");
  CHECK(once == parallel);

  // Different seed changes the digests.
  cfg.seed = 8;
  CHECK(st::run_suite(cfg).to_json().dump() != once);
}

TEST_CASE("constants suite passes and reports every constant") {
  st::SuiteConfig cfg;
  cfg.suite = "constants";
  st::VerifyReport rep = st::run_suite(cfg);
  CHECK(rep.aggregate_pass);
  CHECK(rep.checks.size() == 8);
  // wall time never leaks into the default serialization
  std::string txt = rep.to_json().dump();
  CHECK(txt.find("wall_ms") == std::string::npos);
  CHECK(rep.to_json(true).dump().find("wall_ms") != std::string::npos);
}

TEST_CASE("unknown suite is a typed error") {
  st::SuiteConfig cfg;
  cfg.suite = "nonsense";
  CHECK_THROWS_AS(st::run_suite(cfg), Error);
}

TEST_CASE("gen_config families") {
  FiniteDomain r6 = st::gen_config("random-6", 7);
  CHECK(r6.points.size() == 6);
  CHECK(!r6.hull.doubled);
  HullDiagnostics d = validate(r6.hull);
  CHECK(d.euler_ok);

  FiniteDomain tight = st::gen_config("two-cluster:0.03", 3);
  auto gs = closed_geodesics(tight.dome, 2.0 * std::asinh(1.0), {});
  REQUIRE(!gs.empty());
  CHECK(gs.front().length < 2.0 * std::asinh(1.0));

  FiniteDomain ann = st::gen_config("annulus:2,8", 1);
  CHECK(ann.points.size() == 16);
  int tris = 0, caps = 0;
  for (const auto& f : ann.hull.faces) {
    if (f.vertices.size() == 3) ++tris;
    else ++caps;
  }
  CHECK(tris == 16);  // all lateral faces are triangles
  CHECK(caps == 2);

  CHECK_THROWS_AS(st::gen_config("withered-prune", 1), Error);
}

TEST_CASE("band face cycle walks the lateral triangles once") {
  FiniteDomain ann = st::gen_config("annulus:2,8", 1);
  std::vector<int> band = st::band_face_cycle(ann.hull);
  CHECK(band.size() == 16);
  auto core = geodesic_in_class(ann.dome, band);
  REQUIRE(core.has_value());
  CHECK(core->length > 0);
  CHECK(core->inumber >= 2 * kPi - 1e-9);
}

TEST_CASE("small runs of the verification suites pass") {
  struct Row {
    const char* suite;
    io::json params;
  };
  const Row rows[] = {
      {"vertex-sums", {{"configs", 5}}},
      {"finiteptoh", {{"hulls", 2}, {"paths_per_hull", 2}}},
      {"thick", {{"arcs", 12}}},
      {"thin", {{"seeds_per_radius", 1}}},
      {"pointwise", {{"configs", 4}, {"points_per_config", 25}, {"annulus_samples", 50}}},
      {"mmdemo", {{"n_max", 4}}},
      {"appendix", {{"samples", 40}}},
  };
  for (const auto& row : rows) {
    st::SuiteConfig cfg;
    cfg.suite = row.suite;
    cfg.seed = 5;
    cfg.params = row.params;
    st::VerifyReport rep = st::run_suite(cfg);
    INFO(row.suite);
    for (const auto& c : rep.checks) {
      INFO(c.name, " margin=", c.margin);
      CHECK(c.pass);
    }
    CHECK(rep.aggregate_pass);
  }
}

TEST_CASE("annulus suite: dome core converges; the quoted tau target cannot") {
  st::SuiteConfig cfg;
  cfg.suite = "annulus";
  cfg.seed = 5;
  cfg.params = io::json{{"n_schedule", {8, 16}}};
  st::VerifyReport rep = st::run_suite(cfg);
  // The dome-core and 2pi checks hold, and the sequence converges to the
  // length implied by the pointwise Thurston density, 2 pi coth(s/4). The
  // quoted closed form 2 pi + 2 pi / sinh(s/2) differs from that limit, so
  // its convergence records stay red by construction.
  for (const auto& c : rep.checks) {
    INFO(c.name, " margin=", c.margin);
    if (c.name.rfind("tau-core-monotone", 0) == 0 || c.name == "tau-core-final-error")
      CHECK(!c.pass);
    else
      CHECK(c.pass);
  }
  CHECK(!rep.aggregate_pass);
}

TEST_CASE("sandwich suite at reduced size") {
  st::SuiteConfig cfg;
  cfg.suite = "sandwich";
  cfg.seed = 5;
  cfg.params = io::json{{"hulls", 3}, {"pairs_per_hull", 12}};
  st::VerifyReport rep = st::run_suite(cfg);
  for (const auto& c : rep.checks) {
    INFO(c.name, " margin=", c.margin);
    CHECK(c.pass);
  }
}

}  // TEST_SUITE
