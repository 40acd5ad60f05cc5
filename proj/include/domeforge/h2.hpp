#pragma once

#include "domeforge/geom.hpp"

#include <cmath>

namespace domeforge::h2 {

/// Orientation-preserving isometry of the upper half-plane, det normalized to 1.
struct RealMobius {
  double a = 1, b = 0, c = 0, d = 1;

  RealMobius() = default;
  RealMobius(double a_, double b_, double c_, double d_, bool normalize = true);

  double trace() const { return a + d; }
  RealMobius inverse() const { return {d, -b, -c, a, false}; }
  /// Rescaled to det = 1 with a sign-canonical first row (dedup keys, traces).
  RealMobius normalized() const;

  cplx operator()(const cplx& z) const;
  ExtPoint boundary(const ExtPoint& x) const;  // action on R u {inf}
  double deriv_abs(const cplx& z) const;
};

RealMobius operator*(const RealMobius& m, const RealMobius& n);

/// Hyperbolic distance in the upper half-plane.
double dist(const cplx& z, const cplx& w);

/// Map taking boundary points (p, q) to (0, inf), orientation-preserving.
RealMobius normalizer_to_axis(const ExtPoint& p, const ExtPoint& q);

/// Ideal endpoints of the geodesic through interior points z, w, ordered so the
/// walk z -> w heads toward the second endpoint.
void geodesic_through(const cplx& z, const cplx& w, ExtPoint& e_back, ExtPoint& e_fwd);

/// Ideal endpoints of the geodesic through z with tangent direction theta.
void geodesic_ray(const cplx& z, double theta, ExtPoint& e_back, ExtPoint& e_fwd);

double dist_to_geodesic(const cplx& z, const ExtPoint& p, const ExtPoint& q);

/// Distance between two geodesics; zero if they cross or share an endpoint.
double dist_between_geodesics(const ExtPoint& a, const ExtPoint& b,
                              const ExtPoint& c, const ExtPoint& d);

/// Signed side of z relative to the directed geodesic (p, q): positive on the left.
double side_value(const cplx& z, const ExtPoint& p, const ExtPoint& q);

}  // namespace domeforge::h2
