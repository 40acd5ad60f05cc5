#include <doctest.h>

#include "domeforge/formulas.hpp"
#include "domeforge/geom.hpp"
#include "domeforge/suites.hpp"

#include <cmath>
#include <numbers>

using namespace domeforge;
namespace fm = domeforge::formulas;

namespace {

const double kPi = std::numbers::pi;
const double kAsinh1 = std::asinh(1.0);

// Independent long-double route for F, used to freeze expected values.
long double F_oracle(long double x) {
  long double s = std::sinh(x / 2.0L);
  return x / 2.0L + std::asinh(s / std::sqrt(1.0L - s * s));
}

}  // namespace

TEST_SUITE("formulas") {

TEST_CASE("F: domain, fixed values, monotonicity") {
  CHECK_THROWS_AS(fm::F(0.0), Error);
  CHECK_THROWS_AS(fm::F(2 * kAsinh1), Error);
  CHECK_THROWS_AS(fm::F(-1.0), Error);

  // Known anchor: F(0.838682) = asinh(1).
  CHECK(fm::F(0.838682) == doctest::Approx(kAsinh1).epsilon(1e-5));
  // Oracle-frozen value (direct high-precision evaluation).
  CHECK(fm::F(1.0) == doctest::Approx(static_cast<double>(F_oracle(1.0L))).epsilon(1e-12));
  CHECK(fm::F(1.0) == doctest::Approx(1.0778422).epsilon(1e-6));

  suites::Rng rng(21);
  double prev = 0;
  for (int i = 1; i < 60; ++i) {
    double x = i * (2 * kAsinh1 - 2e-3) / 60.0 + 1e-3;
    double v = fm::F(x);
    CHECK(v > x);  // second summand positive
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("G inverts F") {
  CHECK(fm::G(kAsinh1) == doctest::Approx(0.838682).epsilon(1e-5));
  CHECK(std::abs(fm::G(1e6) - 2 * kAsinh1) < 1e-6);
  for (double x : {0.1, 1.0, 5.0})
    CHECK(fm::F(fm::G(x)) == doctest::Approx(x).epsilon(1e-10));
  for (double x : {0.1, 0.5, 1.0, 1.5, 1.7})
    CHECK(fm::G(fm::F(x)) == doctest::Approx(x).epsilon(1e-10));
  // Relative accuracy survives tiny arguments (used by the lift constants).
  double g = 1e-40;
  CHECK(fm::G(g) == doctest::Approx(g).epsilon(1e-6));
}

TEST_CASE("collar width") {
  CHECK(fm::collar_width(2 * kAsinh1) == doctest::Approx(kAsinh1).epsilon(1e-12));
  CHECK(fm::collar_width(1e-6) > 10.0);
  // Direct evaluation: asinh(1 / sinh(0.5)).
  CHECK(fm::collar_width(1.0) ==
        doctest::Approx(std::asinh(1.0 / std::sinh(0.5))).epsilon(1e-14));
  CHECK(fm::collar_width(1.0) == doctest::Approx(1.4068291).epsilon(1e-6));
  CHECK(fm::collar_width(1.0) > fm::collar_width(1.5));
}

TEST_CASE("R branches") {
  CHECK(fm::R(kPi / 2) == doctest::Approx(2 * kAsinh1).epsilon(1e-12));
  CHECK(fm::R(2 * kPi / 3) ==
        doctest::Approx(2 * std::asinh(1.0 / std::tan(kPi / 3))).epsilon(1e-12));
  CHECK(fm::R(2 * kPi / 3) == doctest::Approx(1.0986123).epsilon(1e-6));
  double prev = fm::R(kPi / 2 + 1e-6);
  for (double t = kPi / 2 + 0.1; t < kPi - 0.05; t += 0.1) {
    double v = fm::R(t);
    CHECK(v < prev);
    prev = v;
  }
  // Two-branch continuity across pi/2.
  CHECK(std::abs(fm::R(kPi / 2 - 1e-9) - fm::R(kPi / 2 + 1e-9)) < 1e-7);
}

TEST_CASE("isosceles max perimeter") {
  CHECK(fm::isosceles_max_perimeter(1.0, kPi / 2) == doctest::Approx(2.3653329).epsilon(1e-6));
  // gamma -> pi degenerates to twice the side.
  CHECK(fm::isosceles_max_perimeter(0.8, kPi - 1e-9) == doctest::Approx(1.6).epsilon(1e-6));
  CHECK(fm::isosceles_max_perimeter(1.0, 0.3) > 1.0);
}

TEST_CASE("arc angle lower bound") {
  CHECK(fm::arc_angle_lower(0.0) == doctest::Approx(kPi));
  CHECK(fm::arc_angle_lower(2 * kAsinh1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fm::arc_angle_lower(1.0) ==
        doctest::Approx(2 * std::acos(std::sinh(0.5))).epsilon(1e-14));
  CHECK(fm::arc_angle_lower(1.0) == doctest::Approx(2.0453251).epsilon(1e-6));
  CHECK_THROWS_AS(fm::arc_angle_lower(-0.1), Error);
  CHECK_THROWS_AS(fm::arc_angle_lower(2.0), Error);
}

TEST_CASE("constant table") {
  fm::ConstantTable pc = fm::constants();
  CHECK(pc.K0 == doctest::Approx(7.1219).epsilon(2e-4));
  CHECK(pc.K == doctest::Approx(8.49).epsilon(2e-3));
  CHECK(pc.Kp == doctest::Approx(4.56).epsilon(2e-3));
  CHECK(pc.K0p == doctest::Approx(8.05).epsilon(2e-3));
  CHECK(pc.Phi == doctest::Approx(0.4084).epsilon(1e-3));
  CHECK(pc.k == doctest::Approx(5.76).epsilon(1e-3));
  CHECK(pc.m == doctest::Approx(2.69).epsilon(1e-3));
  // Structural identities hold exactly by construction.
  CHECK(pc.K0 == doctest::Approx(2 * kPi + pc.G_asinh1).epsilon(1e-15));
  CHECK(pc.K == doctest::Approx(pc.K0 / pc.G_asinh1).epsilon(1e-15));
  CHECK(pc.K0p == doctest::Approx(2 * kPi + 2 * kAsinh1).epsilon(1e-15));
  CHECK(pc.Kp == doctest::Approx(pc.K0p / (2 * kAsinh1)).epsilon(1e-15));
}

TEST_CASE("lift constants") {
  double m = std::acosh(std::exp(2.0));
  // Algebraic route: e^{-m} = e^2 - sqrt(e^4 - 1).
  double em = std::exp(2.0) - std::sqrt(std::exp(4.0) - 1.0);
  CHECK(std::exp(-m) == doctest::Approx(em).epsilon(1e-12));

  fm::LiftConstants lc = fm::lift_constants(kPi * kPi / 2);
  CHECK(lc.g == doctest::Approx(0.5 * em * std::exp(-1.0)).epsilon(1e-12));
  CHECK(lc.g == doctest::Approx(0.0125045).epsilon(1e-4));

  // nu -> infinity: g -> e^{-m}/2.
  fm::LiftConstants big = fm::lift_constants(1e9);
  CHECK(big.g == doctest::Approx(0.5 * em).epsilon(1e-6));
  CHECK(big.L0 <= 2 * kPi + 2 * kAsinh1 + 1e-12);

  // L(nu) = O(e^{pi^2 / 2 nu}): the normalized log ratio decreases toward 1.
  double prev = 1e9;
  for (double nu : {0.2, 0.1, 0.05}) {
    fm::LiftConstants l = fm::lift_constants(nu);
    double ratio = std::log(l.L) * 2.0 * nu / (kPi * kPi);
    CHECK(ratio < prev);
    CHECK(ratio > 1.0);
    prev = ratio;
  }
  CHECK(prev < 1.06);

  // L >= K always.
  CHECK(fm::lift_constants(1.0).L >= fm::constants().K);
}

TEST_CASE("qc constants in log scale") {
  CHECK(fm::log_quasisymmetry_bound(1.0, 1.0) == doctest::Approx(1546.0));
  CHECK(fm::log_quasisymmetry_bound(1.0, 0.5) == doctest::Approx(1546.0));  // max{C,1}

  fm::QcConstants qc1 = fm::qc_constants_log(1.0);
  // At nu = 1 the max is achieved by L(nu), which dwarfs
  // the Lipschitz branch 2 sqrt2 (k + pi^2/2).
  fm::LiftConstants lc = fm::lift_constants(1.0);
  double lip = 2 * std::sqrt(2.0) * (fm::constants().k + kPi * kPi / 2.0);
  CHECK(lc.L > lip);
  CHECK(qc1.logN ==
        doctest::Approx(1546.0 * std::pow(lc.L, 4) * lc.L0).epsilon(1e-12));
  CHECK(qc1.logM_overflows);
  CHECK(qc1.logM_coeff == doctest::Approx(std::log(4e8)));

  double prev = 1e300;
  for (double nu : {0.5, 1.0, 2.0, 5.0}) {
    double v = fm::qc_constants_log(nu).logN;
    CHECK(v < prev);
    prev = v;
  }
}

}  // TEST_SUITE
