#include "domeforge/h2.hpp"

#include <algorithm>
#include <cmath>

namespace domeforge::h2 {

RealMobius::RealMobius(double a_, double b_, double c_, double d_, bool normalize)
    : a(a_), b(b_), c(c_), d(d_) {
  double det = a * d - b * c;
  if (det <= 0) throw Error(ErrorCode::invalid_input, "RealMobius: determinant must be positive");
  if (normalize) {
    double s = std::sqrt(det);
    a /= s; b /= s; c /= s; d /= s;
  }
}

cplx RealMobius::operator()(const cplx& z) const {
  return (a * z + b) / (c * z + d);
}

ExtPoint RealMobius::boundary(const ExtPoint& x) const {
  if (x.is_inf()) {
    if (std::abs(c) < 1e-300) return ExtPoint::inf();
    return ExtPoint(a / c, 0.0);
  }
  double num = a * x.re() + b;
  double den = c * x.re() + d;
  double scale = std::max({std::abs(a * x.re()), std::abs(b), 1.0});
  if (std::abs(den) < 1e-14 * scale) return ExtPoint::inf();
  return ExtPoint(num / den, 0.0);
}

double RealMobius::deriv_abs(const cplx& z) const {
  return (a * d - b * c) / std::norm(c * z + d);
}

RealMobius RealMobius::normalized() const {
  double det = a * d - b * c;
  double s = std::sqrt(det);
  RealMobius r(a / s, b / s, c / s, d / s, false);
  // Canonical sign: first significant entry positive.
  double lead = std::abs(r.a) > 1e-12 ? r.a : (std::abs(r.b) > 1e-12 ? r.b : r.c);
  if (lead < 0) { r.a = -r.a; r.b = -r.b; r.c = -r.c; r.d = -r.d; }
  return r;
}

RealMobius operator*(const RealMobius& m, const RealMobius& n) {
  return RealMobius(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                    m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d, false);
}

double dist(const cplx& z, const cplx& w) {
  double c = 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
  return std::acosh(std::max(1.0, c));
}

RealMobius normalizer_to_axis(const ExtPoint& p, const ExtPoint& q) {
  if (p.is_inf() && q.is_inf())
    throw Error(ErrorCode::invalid_input, "normalizer_to_axis: degenerate geodesic");
  if (p.is_inf()) return RealMobius(0, 1, -1, q.re(), false);  // z -> 1/(q-z): inf->0, q->inf
  if (q.is_inf()) return RealMobius(1, -p.re(), 0, 1, false);  // z -> z - p
  double a = p.re(), b = q.re();
  if (a == b) throw Error(ErrorCode::invalid_input, "normalizer_to_axis: coincident endpoints");
  if (a < b) return RealMobius(1, -a, -1, b, false);  // (z-a)/(b-z), det = b-a
  return RealMobius(1, -a, 1, -b, false);             // (z-a)/(z-b), det = a-b
}

void geodesic_through(const cplx& z, const cplx& w, ExtPoint& e_back, ExtPoint& e_fwd) {
  double x1 = z.real(), y1 = z.imag(), x2 = w.real(), y2 = w.imag();
  if (std::abs(x1 - x2) < 1e-13 * std::max({std::abs(x1), std::abs(x2), 1.0})) {
    // Vertical line.
    if (y2 > y1) { e_back = ExtPoint(x1, 0); e_fwd = ExtPoint::inf(); }
    else         { e_back = ExtPoint::inf(); e_fwd = ExtPoint(x1, 0); }
    return;
  }
  double c = (std::norm(w) - std::norm(z)) / (2.0 * (x2 - x1));
  double r = std::sqrt((x1 - c) * (x1 - c) + y1 * y1);
  ExtPoint left(c - r, 0), right(c + r, 0);
  // Walking z -> w heads toward the endpoint on w's side of the circle.
  if (x2 > x1) { e_back = left; e_fwd = right; }
  else         { e_back = right; e_fwd = left; }
}

void geodesic_ray(const cplx& z, double theta, ExtPoint& e_back, ExtPoint& e_fwd) {
  double ct = std::cos(theta), st = std::sin(theta);
  if (std::abs(ct) < 1e-13) {
    if (st > 0) { e_back = ExtPoint(z.real(), 0); e_fwd = ExtPoint::inf(); }
    else        { e_back = ExtPoint::inf(); e_fwd = ExtPoint(z.real(), 0); }
    return;
  }
  // Geodesic circle centered (c, 0) through z with tangent (ct, st):
  // radius vector (z - c) is perpendicular to the tangent.
  double c = z.real() + z.imag() * st / ct;
  double r = std::sqrt((z.real() - c) * (z.real() - c) + z.imag() * z.imag());
  ExtPoint left(c - r, 0), right(c + r, 0);
  if (ct > 0) { e_back = left; e_fwd = right; }
  else        { e_back = right; e_fwd = left; }
}

double dist_to_geodesic(const cplx& z, const ExtPoint& p, const ExtPoint& q) {
  RealMobius m = normalizer_to_axis(p, q);
  cplx w = m(z);
  return std::asinh(std::abs(w.real()) / w.imag());
}

double dist_between_geodesics(const ExtPoint& a, const ExtPoint& b,
                              const ExtPoint& c, const ExtPoint& d) {
  RealMobius m = normalizer_to_axis(a, b);
  ExtPoint cc = m.boundary(c), dd = m.boundary(d);
  // Against the axis (0, inf): crossing iff the endpoints have opposite signs.
  // An infinite image endpoint means the geodesics share an ideal endpoint
  // (asymptotic), so the infimum distance is zero.
  if (cc.is_inf() || dd.is_inf()) return 0.0;
  double u = cc.re(), v = dd.re();
  if (u == 0 || v == 0) return 0.0;            // shared endpoint
  if ((u < 0) != (v < 0)) return 0.0;          // crossing
  double cr = std::min(std::abs(u / v), std::abs(v / u));
  if (cr >= 1.0) return 0.0;
  double coshd = (1.0 + cr) / (1.0 - cr);
  return std::acosh(std::max(1.0, coshd));
}

double side_value(const cplx& z, const ExtPoint& p, const ExtPoint& q) {
  RealMobius m = normalizer_to_axis(p, q);
  return -m(z).real();
}

}  // namespace domeforge::h2
