#pragma once

#include "domeforge/npr.hpp"

#include <functional>
#include <vector>

namespace domeforge::confmetric {

/// Quasihyperbolic density q(z) = 1 / dist(z, X); infinity contributes nothing.
double qh_density(const std::vector<ExtPoint>& X, const cplx& z);

/// Beardon-Pommerenke beta: inf over nearest a and b in X \ {a} of
/// |log(|z-a| / |z-b|)|; +inf when only the point at infinity remains.
double beta(const std::vector<ExtPoint>& X, const cplx& z);

struct Envelope {
  double lower = 0, upper = 0;
};

/// Poincare density envelope (q / (sqrt2 (k + beta)), min{(2k + pi/2)/(k + beta), 2} q).
Envelope bp_envelope(const std::vector<ExtPoint>& X, const cplx& z);
Envelope bp_envelope_from(double q, double beta_value);

/// Round annulus 1 < |z| < e^s: exact Poincare density
/// (pi/s) / (|z| sin(pi log|z| / s)).
double annulus_poincare_density(double s, const cplx& z);

/// Modulus form of beta on the annulus: min(log|z|, s - log|z|).
double annulus_beta(double s, const cplx& z);

double annulus_qh_density(double s, const cplx& z);

/// Pointwise Thurston density of the annulus, from the maximal inscribed disk
/// tangent to both boundary circles: (e^s - 1) / ((|z|-1)(e^s - |z|)).
double annulus_thurston_density(double s, const cplx& z);

/// Same quantity by minimizing the horoball functional over the ruling
/// chords of the dome (test oracle for the closed form).
double annulus_thurston_density_by_search(double s, const cplx& z);

struct AnnulusClosedForms {
  double rho_core = 0;   // 2 pi^2 / s
  double dome_core = 0;  // 2 pi / sinh(s/2)
  double tau_core = 0;   // 2 pi + 2 pi / sinh(s/2): Thurston length of the core class
  double t_s = 0;        // acosh(1 / asinh(pi^2 / s))
  bool t_s_valid = false;
};

AnnulusClosedForms annulus_closed_forms(double s);

/// Adaptive-Simpson length of a straight polyline under a conformal density.
double path_length(const std::function<double(cplx)>& density,
                   const std::vector<cplx>& polyline, double tol = 1e-9);

struct MmDemoResult {
  double d_rho_radial = 0;  // radial Poincare length e^{-n} -> e^{n} in A_n
  double d_q_radial = 0;    // radial quasihyperbolic length, closed form
};

/// A_n = {e^{-2n} <= |z| <= e^{2n}} with marked points e^{-n}, e^{n}.
MmDemoResult mm_demo(int n);

struct DistanceBracket {
  double lower = 0, upper = 0;
  double refined_to = 0;  // grid spacing of the last refinement (0 = collapsed)
  bool converged = false;
};

struct BracketSchedule {
  std::vector<double> spacings{0.2, 0.1, 0.05};
  double target_gap = 0.05;  // relative
  int max_nodes = 20000;
};

/// Bracket for d_tau(z, w): lower from the dome geodesic through the nearest
/// point retraction, upper from a tau-weighted planar graph refined over the
/// spacing schedule.
DistanceBracket tau_distance_bracket(const FiniteDomain& D, const cplx& z, const cplx& w,
                                     const BracketSchedule& schedule = {});

}  // namespace domeforge::confmetric
