#include "domeforge/formulas.hpp"

#include "domeforge/geom.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace domeforge::formulas {

namespace {
const double kAsinh1 = std::asinh(1.0);
const double kTwoAsinh1 = 2.0 * kAsinh1;
const double kPi = std::numbers::pi;
}  // namespace

double F(double x) {
  if (!(x > 0.0) || !(x < kTwoAsinh1))
    throw Error(ErrorCode::out_of_domain, "F: argument outside (0, 2 asinh 1)");
  double s = std::sinh(0.5 * x);
  double rad = 1.0 - s * s;
  if (rad <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * x + std::asinh(s / std::sqrt(rad));
}

double G(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::out_of_domain, "G: argument must be positive");
  // F is monotone; bracket and bisect. For small targets F(t) ~ t + t^3/16,
  // so a tight relative bracket keeps the answer accurate in relative terms.
  double lo, hi;
  if (x < 0.05) {
    lo = 0.5 * x;
    hi = std::min(1.5 * x, kTwoAsinh1 * (1.0 - 1e-15));
  } else {
    lo = std::numeric_limits<double>::min();
    hi = kTwoAsinh1 * (1.0 - 1e-16);
  }
  auto value = [](double t) { return t <= 0.0 ? 0.0 : F(t); };
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (value(mid) < x)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(lo, 1e-30) || hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

double collar_width(double l) {
  if (!(l > 0.0)) throw Error(ErrorCode::out_of_domain, "collar_width: length must be positive");
  return std::asinh(1.0 / std::sinh(0.5 * l));
}

double R(double theta) {
  if (!(theta > 0.0) || !(theta < kPi))
    throw Error(ErrorCode::out_of_domain, "R: angle outside (0, pi)");
  if (theta > 0.5 * kPi) return 2.0 * std::asinh(1.0 / std::tan(0.5 * theta));
  return 2.0 * std::asinh(std::sin(theta) / std::tan(0.5 * theta));
}

double isosceles_max_perimeter(double C, double gamma) {
  if (!(C > 0.0)) throw Error(ErrorCode::out_of_domain, "isosceles_max_perimeter: C must be positive");
  if (!(gamma > 0.0) || !(gamma < kPi))
    throw Error(ErrorCode::out_of_domain, "isosceles_max_perimeter: gamma outside (0, pi)");
  return C + 2.0 * std::asinh(std::sinh(0.5 * C) / std::sin(0.5 * gamma));
}

double arc_angle_lower(double L) {
  if (L < 0.0 || L > kTwoAsinh1)
    throw Error(ErrorCode::out_of_domain, "arc_angle_lower: length outside [0, 2 asinh 1]");
  double s = std::sinh(0.5 * L);
  // acos near 1 amplifies the last ulp of sinh to ~1e-8; pin the endpoint.
  if (s >= 1.0 - 1e-15) return 0.0;
  return 2.0 * std::acos(s);
}

ConstantTable constants() {
  ConstantTable pc;
  pc.G_asinh1 = G(kAsinh1);
  pc.K0 = 2.0 * kPi + pc.G_asinh1;
  pc.K = pc.K0 / pc.G_asinh1;
  pc.K0p = 2.0 * kPi + kTwoAsinh1;
  pc.Kp = pc.K0p / kTwoAsinh1;
  pc.Phi = std::asin(4.0 / (5.0 * std::sqrt(2.0) + 3.0));
  pc.k = 4.0 + std::log(3.0 + 2.0 * std::sqrt(2.0));
  pc.m = std::acosh(std::exp(2.0));
  return pc;
}

LiftConstants lift_constants(double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::out_of_domain, "lift_constants: nu must be positive");
  double m = std::acosh(std::exp(2.0));
  LiftConstants lc;
  lc.g = 0.5 * std::exp(-m) * std::exp(-kPi * kPi / (2.0 * nu));
  double Gg = G(lc.g);
  lc.L0 = 2.0 * kPi + Gg;
  lc.L = lc.L0 / Gg;
  return lc;
}

double log_quasisymmetry_bound(double K, double C) {
  return 1546.0 * K * K * K * K * std::max(C, 1.0);
}

QcConstants qc_constants_log(double nu) {
  LiftConstants lc = lift_constants(nu);
  double k = constants().k;
  double lip = 2.0 * std::sqrt(2.0) * (k + kPi * kPi / (2.0 * nu));
  double K = std::max(lip, lc.L);
  QcConstants qc;
  qc.logN = log_quasisymmetry_bound(K, lc.L0);
  qc.logM_coeff = std::log(4e8);
  qc.logM_factor = 70.0;
  if (qc.logN < 700.0) {
    qc.logM_overflows = false;
    qc.logM = qc.logM_coeff + qc.logM_factor * std::exp(qc.logN);
  } else {
    qc.logM_overflows = true;
    qc.logM = std::numeric_limits<double>::infinity();
  }
  return qc;
}

}  // namespace domeforge::formulas
