#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace domeforge {

using cplx = std::complex<double>;

enum class ErrorCode {
  invalid_input,
  degenerate,
  out_of_domain,
  non_transverse,
  budget_exhausted,
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

/// Point of the Riemann sphere: a finite complex number or the point at infinity.
struct ExtPoint {
  cplx z{0.0, 0.0};
  bool infinite = false;

  ExtPoint() = default;
  ExtPoint(double re, double im) : z(re, im) {}
  ExtPoint(cplx w) : z(w) {}
  static ExtPoint inf() { ExtPoint p; p.infinite = true; return p; }

  bool is_inf() const { return infinite; }
  double re() const { return z.real(); }
  double im() const { return z.imag(); }
};

/// Unit vector on S^2. Convention: 0 <-> south pole (0,0,-1), inf <-> north pole.
struct SpherePoint {
  double x = 0, y = 0, z = 0;
};

SpherePoint to_sphere(const ExtPoint& p);
ExtPoint from_sphere(const SpherePoint& v);

/// Chordal distance between two sphere points (extrinsic R^3 distance).
double chordal(const ExtPoint& a, const ExtPoint& b);

/// Oriented plane {v . u = h} cutting S^2 in a circle; the "disk side" is {v . u > h}.
struct SphereCircle {
  SpherePoint u;   // unit normal
  double h = 0;    // offset, |h| < 1 for a genuine circle
};

/// Generalized circle in the plane: a circle or a line, with an orientation bit
/// marking which complementary disk is "the disk side".
struct GenCircle {
  enum class Kind { circle, line } kind = Kind::circle;
  // circle
  cplx center{0, 0};
  double radius = 1;
  bool disk_is_interior = true;
  // line {Re(conj(normal) z) = offset}; unit normal
  cplx normal{0, 1};
  double offset = 0;
  bool disk_is_positive = false;  // disk side = {Re(conj(normal) z) > offset}

  static GenCircle make_circle(cplx c, double r, bool interior = true);
  static GenCircle make_line(cplx unit_normal, double off, bool positive = false);

  /// Signed side value: zero on the curve; sign identifies which side z is on.
  double side_value(const ExtPoint& z) const;
  /// True if z lies strictly on the disk side.
  bool on_disk_side(const ExtPoint& z) const;
  /// A sample point strictly inside the disk side.
  ExtPoint disk_sample() const;
};

/// Conversions between the planar and spherical circle representations.
/// Orientation is preserved: the GenCircle disk side maps onto {v . u > h}.
SphereCircle to_sphere_circle(const GenCircle& c);
GenCircle from_sphere_circle(const SphereCircle& sc);

/// Circle through three pairwise distinct points. Orientation bit unspecified
/// (callers needing a particular disk side set it themselves).
GenCircle circle_through(const ExtPoint& a, const ExtPoint& b, const ExtPoint& c);

/// Intersection angle in (0, pi) measured between the disk sides: the angle of
/// the outward normals (pointing away from each disk side) at a crossing point.
/// Under the hull orientation convention this equals the exterior dihedral
/// angle of the two support planes. Throws for tangent or disjoint circles.
double circle_angle(const GenCircle& c1, const GenCircle& c2);

/// Same angle evaluated directly on the sphere at crossing point v.
double sphere_circle_angle(const SphereCircle& a, const SphereCircle& b, const SpherePoint& v);

/// Point of the upper half-space model of H^3.
struct H3Point {
  cplx x{0, 0};
  double t = 1;
  H3Point() = default;
  H3Point(cplx horizontal, double height) : x(horizontal), t(height) {}
};

/// cosh d = 1 + (|x1-x2|^2 + (t1-t2)^2) / (2 t1 t2)
double h3_distance(const H3Point& p, const H3Point& q);

/// Euclidean radius of the horoball based at finite z whose boundary passes
/// through p: h = (|x-z|^2 + t^2) / (2t).
double horoball_radius(const ExtPoint& z, const H3Point& p);

/// Distance from p to the geodesic with ideal endpoints a, b.
double h3_dist_to_geodesic(const H3Point& p, const ExtPoint& a, const ExtPoint& b);

/// Moebius transformation z -> (az+b)/(cz+d), stored normalized to ad-bc = 1.
struct MobiusMap {
  cplx a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  MobiusMap() = default;
  MobiusMap(cplx a_, cplx b_, cplx c_, cplx d_, bool normalize_det = true);

  static MobiusMap identity() { return {}; }
  /// Map sending (p, q, r) to (0, 1, inf).
  static MobiusMap three_point(const ExtPoint& p, const ExtPoint& q, const ExtPoint& r);

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
  MobiusMap inverse() const { return {d, -b, -c, a, false}; }

  ExtPoint operator()(const ExtPoint& p) const;
  /// Poincare extension to upper half-space.
  H3Point operator()(const H3Point& p) const;
  /// Image circle of a generalized circle, orientation carried along.
  GenCircle operator()(const GenCircle& c) const;
  /// |m'(z)| at a finite point not mapped to infinity.
  double deriv_abs(const cplx& z) const;
};

MobiusMap operator*(const MobiusMap& m, const MobiusMap& n);

ExtPoint apply_mobius(const MobiusMap& m, const ExtPoint& p);

}  // namespace domeforge
