#include "domeforge/geom.hpp"

#include <cmath>
#include <algorithm>

namespace domeforge {

namespace {

double dot(const SpherePoint& a, const SpherePoint& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
SpherePoint cross(const SpherePoint& a, const SpherePoint& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
SpherePoint sub(const SpherePoint& a, const SpherePoint& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
SpherePoint scale(const SpherePoint& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double norm(const SpherePoint& a) { return std::sqrt(dot(a, a)); }
SpherePoint normalized(const SpherePoint& a) {
  double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

}  // namespace

SpherePoint to_sphere(const ExtPoint& p) {
  if (p.is_inf()) return {0, 0, 1};
  double r2 = std::norm(p.z);
  double s = 1.0 / (1.0 + r2);
  return {2.0 * p.re() * s, 2.0 * p.im() * s, (r2 - 1.0) * s};
}

ExtPoint from_sphere(const SpherePoint& v) {
  double denom = 1.0 - v.z;
  if (denom < 1e-14) return ExtPoint::inf();
  return ExtPoint(cplx(v.x / denom, v.y / denom));
}

double chordal(const ExtPoint& a, const ExtPoint& b) {
  SpherePoint p = to_sphere(a), q = to_sphere(b);
  return norm(sub(p, q));
}

GenCircle GenCircle::make_circle(cplx c, double r, bool interior) {
  if (!(r > 0)) throw Error(ErrorCode::invalid_input, "circle radius must be positive");
  GenCircle g;
  g.kind = Kind::circle;
  g.center = c;
  g.radius = r;
  g.disk_is_interior = interior;
  return g;
}

GenCircle GenCircle::make_line(cplx unit_normal, double off, bool positive) {
  double n = std::abs(unit_normal);
  if (n < 1e-14) throw Error(ErrorCode::invalid_input, "line normal must be nonzero");
  GenCircle g;
  g.kind = Kind::line;
  g.normal = unit_normal / n;
  g.offset = off / n;
  g.disk_is_positive = positive;
  return g;
}

double GenCircle::side_value(const ExtPoint& z) const {
  if (kind == Kind::circle) {
    if (z.is_inf()) return disk_is_interior ? -1.0 : 1.0;  // inf is outside every circle
    double s = std::abs(z.z - center) - radius;
    return disk_is_interior ? -s : s;
  }
  if (z.is_inf()) return 0.0;  // inf lies on every line
  double s = std::real(std::conj(normal) * z.z) - offset;
  return disk_is_positive ? s : -s;
}

bool GenCircle::on_disk_side(const ExtPoint& z) const { return side_value(z) > 0; }

ExtPoint GenCircle::disk_sample() const {
  if (kind == Kind::circle)
    return disk_is_interior ? ExtPoint(center) : ExtPoint(center + cplx(3.0 * radius, 0));
  cplx foot = normal * offset;
  return ExtPoint(foot + (disk_is_positive ? normal : -normal));
}

SphereCircle to_sphere_circle(const GenCircle& c) {
  // Planar equation A|z|^2 + Bx + Cy + D = 0 lifts to B v1 + C v2 + (A-D) v3 + (A+D) = 0.
  double A, B, C, D;
  if (c.kind == GenCircle::Kind::circle) {
    A = 1.0;
    B = -2.0 * c.center.real();
    C = -2.0 * c.center.imag();
    D = std::norm(c.center) - c.radius * c.radius;
  } else {
    A = 0.0;
    B = c.normal.real();
    C = c.normal.imag();
    D = -c.offset;
  }
  SpherePoint u{B, C, A - D};
  double n = norm(u);
  SphereCircle sc{scale(u, 1.0 / n), -(A + D) / n};
  // Orient so the GenCircle disk side is {v . u > h}.
  SpherePoint s = to_sphere(c.disk_sample());
  if (dot(s, sc.u) - sc.h < 0) {
    sc.u = scale(sc.u, -1.0);
    sc.h = -sc.h;
  }
  return sc;
}

GenCircle from_sphere_circle(const SphereCircle& sc) {
  // Invert the lift: (u3 - h) r^2 + 2 u1 x + 2 u2 y - (u3 + h) = 0.
  double a3 = sc.u.z - sc.h;
  GenCircle g;
  if (std::abs(a3) < 1e-12) {
    cplx n(sc.u.x, sc.u.y);
    double nn = std::abs(n);
    if (nn < 1e-14) throw Error(ErrorCode::degenerate, "sphere circle does not meet the plane");
    g = GenCircle::make_line(n / nn, (sc.u.z + sc.h) / (2.0 * nn));
  } else {
    cplx center(-sc.u.x / a3, -sc.u.y / a3);
    double r2 = std::norm(center) + (sc.u.z + sc.h) / a3;
    if (r2 <= 0) throw Error(ErrorCode::degenerate, "sphere circle with empty planar trace");
    g = GenCircle::make_circle(center, std::sqrt(r2));
  }
  // Fix orientation so the disk side matches {v . u > h}.
  SpherePoint s = to_sphere(g.disk_sample());
  bool sample_positive = dot(s, sc.u) - sc.h > 0;
  if (!sample_positive) {
    if (g.kind == GenCircle::Kind::circle)
      g.disk_is_interior = !g.disk_is_interior;
    else
      g.disk_is_positive = !g.disk_is_positive;
  }
  return g;
}

GenCircle circle_through(const ExtPoint& a, const ExtPoint& b, const ExtPoint& c) {
  const double min_sep = 1e-12;
  if (chordal(a, b) < min_sep || chordal(b, c) < min_sep || chordal(a, c) < min_sep)
    throw Error(ErrorCode::degenerate, "circle_through: coincident points");
  SpherePoint p = to_sphere(a), q = to_sphere(b), r = to_sphere(c);
  SpherePoint n = cross(sub(q, p), sub(r, p));
  double nn = norm(n);
  if (nn < 1e-14) throw Error(ErrorCode::degenerate, "circle_through: collinear sphere points");
  SphereCircle sc{scale(n, 1.0 / nn), 0};
  sc.h = dot(p, sc.u);
  return from_sphere_circle(sc);
}

double sphere_circle_angle(const SphereCircle& a, const SphereCircle& b, const SpherePoint& v) {
  // Tangential components of -u point away from the disk sides.
  SpherePoint wa = sub(scale(a.u, -1.0), scale(v, -dot(v, a.u)));
  SpherePoint wb = sub(scale(b.u, -1.0), scale(v, -dot(v, b.u)));
  double na = norm(wa), nb = norm(wb);
  if (na < 1e-12 || nb < 1e-12)
    throw Error(ErrorCode::degenerate, "circle_angle: tangential direction vanishes");
  double c = dot(wa, wb) / (na * nb);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

namespace {

// Intersection points of two sphere circles, if transverse.
bool sphere_circle_intersections(const SphereCircle& a, const SphereCircle& b,
                                 SpherePoint& v1, SpherePoint& v2) {
  double g = dot(a.u, b.u);
  double det = 1.0 - g * g;
  if (det < 1e-14) return false;  // parallel planes
  double alpha = (a.h - g * b.h) / det;
  double beta = (b.h - g * a.h) / det;
  SpherePoint w = cross(a.u, b.u);
  double w2 = dot(w, w);
  double rem = 1.0 - (alpha * alpha + beta * beta + 2.0 * alpha * beta * g);
  if (rem <= 1e-12 * std::max(1.0, w2)) return false;  // tangent or disjoint
  double gamma = std::sqrt(rem / w2);
  SpherePoint base{alpha * a.u.x + beta * b.u.x, alpha * a.u.y + beta * b.u.y,
                   alpha * a.u.z + beta * b.u.z};
  v1 = {base.x + gamma * w.x, base.y + gamma * w.y, base.z + gamma * w.z};
  v2 = {base.x - gamma * w.x, base.y - gamma * w.y, base.z - gamma * w.z};
  v1 = normalized(v1);
  v2 = normalized(v2);
  return true;
}

}  // namespace

double circle_angle(const GenCircle& c1, const GenCircle& c2) {
  SphereCircle a = to_sphere_circle(c1), b = to_sphere_circle(c2);
  SpherePoint v1, v2;
  if (!sphere_circle_intersections(a, b, v1, v2))
    throw Error(ErrorCode::degenerate, "circle_angle: circles tangent or disjoint");
  double t1 = sphere_circle_angle(a, b, v1);
  double t2 = sphere_circle_angle(a, b, v2);
  return 0.5 * (t1 + t2);  // equal up to roundoff
}

double h3_distance(const H3Point& p, const H3Point& q) {
  double num = std::norm(p.x - q.x) + (p.t - q.t) * (p.t - q.t);
  double c = 1.0 + num / (2.0 * p.t * q.t);
  return std::acosh(std::max(1.0, c));
}

double horoball_radius(const ExtPoint& z, const H3Point& p) {
  if (z.is_inf()) throw Error(ErrorCode::invalid_input, "horoball_radius: base point must be finite");
  return (std::norm(p.x - z.z) + p.t * p.t) / (2.0 * p.t);
}

double h3_dist_to_geodesic(const H3Point& p, const ExtPoint& a, const ExtPoint& b) {
  // Normalize the geodesic to the vertical axis; then sinh d = |x| / t.
  if (a.is_inf() && b.is_inf()) throw Error(ErrorCode::invalid_input, "degenerate geodesic");
  MobiusMap m;
  if (a.is_inf())
    m = MobiusMap(0, 1, 1, -b.z, false);  // z -> 1/(z-b): a -> 0, b -> inf
  else if (b.is_inf())
    m = MobiusMap(1, -a.z, 0, 1, false);  // z -> z-a
  else
    m = MobiusMap(1, -a.z, 1, -b.z, false);
  H3Point q = m(p);
  return std::asinh(std::abs(q.x) / q.t);
}

MobiusMap::MobiusMap(cplx a_, cplx b_, cplx c_, cplx d_, bool normalize_det)
    : a(a_), b(b_), c(c_), d(d_) {
  cplx dt = det();
  if (std::abs(dt) < 1e-300) throw Error(ErrorCode::degenerate, "singular Moebius matrix");
  if (normalize_det) {
    cplx s = std::sqrt(dt);
    a /= s; b /= s; c /= s; d /= s;
  }
}

MobiusMap MobiusMap::three_point(const ExtPoint& p, const ExtPoint& q, const ExtPoint& r) {
  // (z - p)(q - r) / ((z - r)(q - p)), with limits when one point is infinite.
  if (p.is_inf()) return MobiusMap(0, q.z - r.z, 1, -r.z);
  if (q.is_inf()) return MobiusMap(1, -p.z, 1, -r.z);
  if (r.is_inf()) return MobiusMap(1, -p.z, 0, q.z - p.z);
  return MobiusMap(q.z - r.z, -p.z * (q.z - r.z), q.z - p.z, -r.z * (q.z - p.z));
}

ExtPoint MobiusMap::operator()(const ExtPoint& p) const {
  if (p.is_inf()) {
    if (std::abs(c) < 1e-14 * std::abs(a)) return ExtPoint::inf();
    return ExtPoint(a / c);
  }
  cplx num = a * p.z + b;
  cplx den = c * p.z + d;
  double scale = std::max({std::abs(a * p.z), std::abs(b), 1.0});
  if (std::abs(den) < 1e-14 * scale) return ExtPoint::inf();
  return ExtPoint(num / den);
}

H3Point MobiusMap::operator()(const H3Point& p) const {
  // Standard Poincare extension of z -> (az+b)/(cz+d) in quaternion coordinates.
  cplx cz_d = c * p.x + d;
  double denom = std::norm(cz_d) + std::norm(c) * p.t * p.t;
  cplx xnew = ((a * p.x + b) * std::conj(cz_d) + a * std::conj(c) * p.t * p.t) / denom;
  double tnew = p.t * std::abs(det()) / denom;
  return H3Point(xnew, tnew);
}

GenCircle MobiusMap::operator()(const GenCircle& circ) const {
  // Push three points and the disk-side sample through the map.
  ExtPoint s = circ.disk_sample();
  ExtPoint pts[3];
  if (circ.kind == GenCircle::Kind::circle) {
    pts[0] = ExtPoint(circ.center + circ.radius);
    pts[1] = ExtPoint(circ.center - circ.radius);
    pts[2] = ExtPoint(circ.center + cplx(0, circ.radius));
  } else {
    cplx foot = circ.normal * circ.offset;
    cplx dir = circ.normal * cplx(0, 1);
    pts[0] = ExtPoint(foot);
    pts[1] = ExtPoint(foot + dir);
    pts[2] = ExtPoint::inf();
  }
  GenCircle img = circle_through((*this)(pts[0]), (*this)(pts[1]), (*this)(pts[2]));
  ExtPoint simg = (*this)(s);
  if (!img.on_disk_side(simg)) {
    if (img.kind == GenCircle::Kind::circle)
      img.disk_is_interior = !img.disk_is_interior;
    else
      img.disk_is_positive = !img.disk_is_positive;
  }
  return img;
}

double MobiusMap::deriv_abs(const cplx& z) const {
  cplx den = c * z + d;
  return std::abs(det()) / std::norm(den);
}

MobiusMap operator*(const MobiusMap& m, const MobiusMap& n) {
  return MobiusMap(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                   m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d, false);
}

ExtPoint apply_mobius(const MobiusMap& m, const ExtPoint& p) { return m(p); }

}  // namespace domeforge
