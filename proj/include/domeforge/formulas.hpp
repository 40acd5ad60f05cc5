#pragma once

namespace domeforge::formulas {

/// F(x) = x/2 + asinh( sinh(x/2) / sqrt(1 - sinh^2(x/2)) ) on (0, 2 asinh 1).
/// Strictly increasing, blows up at the right endpoint.
double F(double x);

/// G = F^{-1}, defined for x > 0, valued in (0, 2 asinh 1). Bisection to 1e-12
/// (relative near zero, where G(x) ~ x).
double G(double x);

/// Collar half-width w = asinh(1 / sinh(l/2)) of a closed geodesic of length l.
double collar_width(double l);

/// Two-branch lower bound for closed curves meeting all sides of the tangent
/// triangle with apex angle theta; branches agree at theta = pi/2.
double R(double theta);

/// Max perimeter of a hyperbolic triangle with one side C and opposite angle
/// gamma: C + 2 asinh(sinh(C/2) / sin(gamma/2)).
double isosceles_max_perimeter(double C, double gamma);

/// theta >= 2 acos(sinh(L/2)) for arcs of length L <= 2 asinh 1.
double arc_angle_lower(double L);

struct ConstantTable {
  double K;         // K0 / G(asinh 1)
  double K0;        // 2 pi + G(asinh 1)
  double Kp;        // (2 pi + 2 asinh 1) / (2 asinh 1)
  double K0p;       // 2 pi + 2 asinh 1
  double Phi;       // asin(4 / (5 sqrt 2 + 3))
  double k;         // 4 + log(3 + 2 sqrt 2)
  double m;         // acosh(e^2)
  double G_asinh1;  // G(asinh 1)
};

ConstantTable constants();

struct LiftConstants {
  double g;   // (1/2) e^{-m} e^{-pi^2 / (2 nu)}
  double L;   // (2 pi + G(g)) / G(g)
  double L0;  // 2 pi + G(g)
};

LiftConstants lift_constants(double nu);

/// log N(K, C) = 1546 K^4 max{C, 1}; exposed separately because N itself
/// overflows for every interesting argument.
double log_quasisymmetry_bound(double K, double C);

struct QcConstants {
  double logN;
  // log M = log(4e8) + 70 e^{logN}; e^{logN} overflows any float, so M is
  // carried symbolically as (log_coeff, factor, logN).
  double logM_coeff;   // log(4e8)
  double logM_factor;  // 70
  bool logM_overflows;
  double logM;  // finite only when e^{logN} is representable
};

QcConstants qc_constants_log(double nu);

}  // namespace domeforge::formulas
