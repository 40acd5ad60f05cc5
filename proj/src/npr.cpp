#include "domeforge/npr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace domeforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kFarThreshold = 1e6;

struct Candidate {
  double h = kInf;
  H3Point foot;
  bool valid = false;
};

// Tangency of the horoball at finite z with the hemisphere over a circle:
// h = |R^2 - d^2| / (2R), attained above the ray through the center.
Candidate face_candidate_circle(const cplx& z, const cplx& c, double R) {
  Candidate out;
  cplx w = c - z;
  double d2 = std::norm(w);
  double denom = d2 + R * R;
  double h = std::abs(R * R - d2) / (2.0 * R);
  double t = R * std::abs(R * R - d2) / denom;
  if (t < 1e-12) return out;  // z on the circle; the restricted min sits on an edge
  cplx x = z + w * ((d2 - R * R) / denom);
  out.h = h;
  out.foot = H3Point(x, t);
  out.valid = true;
  return out;
}

Candidate face_candidate_line(const cplx& z, const cplx& normal, double offset) {
  Candidate out;
  double s = std::real(std::conj(normal) * z) - offset;
  double dist = std::abs(s);
  if (dist < 1e-12) return out;
  out.h = dist;
  out.foot = H3Point(z - s * normal, dist);
  out.valid = true;
  return out;
}

// Minimum of the horoball functional along an edge geodesic.
Candidate edge_candidate(const cplx& z, const ExtPoint& p, const ExtPoint& q) {
  Candidate out;
  if (p.is_inf() || q.is_inf()) {
    const cplx base = p.is_inf() ? q.z : p.z;
    double h = std::abs(z - base);
    if (h < 1e-300) return out;
    out.h = h;
    out.foot = H3Point(base, h);
    out.valid = true;
    return out;
  }
  cplx m = 0.5 * (p.z + q.z);
  double r = 0.5 * std::abs(q.z - p.z);
  cplx e = (q.z - p.z) / (2.0 * r);
  cplx w = z - m;
  double a = std::real(std::conj(e) * w);
  double w2 = std::norm(w);
  double A = w2 + r * r;
  double disc = A * A - 4.0 * a * a * r * r;
  double h = std::sqrt(std::max(0.0, disc)) / (2.0 * r);
  if (h < 1e-300) return out;
  double cosphi = 2.0 * a * r / A;
  double sinphi = std::sqrt(std::max(0.0, 1.0 - cosphi * cosphi));
  if (sinphi < 1e-12) return out;
  out.h = h;
  out.foot = H3Point(m + (r * cosphi) * e, r * sinphi);
  out.valid = true;
  return out;
}

}  // namespace

FiniteDomain FiniteDomain::create(std::vector<ExtPoint> X, double tol) {
  FiniteDomain D;
  D.points = std::move(X);
  D.hull = build_hull(D.points, tol);
  D.dome = develop(D.hull);
  return D;
}

RetractionResult retract(const FiniteDomain& D, const ExtPoint& z) {
  if (z.is_inf())
    throw Error(ErrorCode::invalid_input, "retract: z = inf (use a finite chart)");
  for (const auto& x : D.points)
    if (chordal(z, x) < 1e-8)
      throw Error(ErrorCode::invalid_input, "retract: z lies in X");

  const IdealPolyhedron& P = D.hull;
  RetractionResult best;
  best.h = kInf;

  for (int f = 0; f < static_cast<int>(P.faces.size()); ++f) {
    const GenCircle& c = P.faces[f].circle;
    Candidate cand = c.kind == GenCircle::Kind::circle
                         ? face_candidate_circle(z.z, c.center, c.radius)
                         : face_candidate_line(z.z, c.normal, c.offset);
    if (!cand.valid || cand.h >= best.h) continue;
    // Tangency foot must lie inside the face polygon (chart membership).
    H3Point chart_pt = D.dome.charts[f].to_chart(cand.foot);
    DomePoint dp{f, cplx(chart_pt.x.real(), chart_pt.t)};
    if (!D.dome.contains(dp, 1e-10)) continue;
    best.kind = RetractionResult::Support::face_interior;
    best.support_id = f;
    best.foot = dp;
    best.foot_ambient = cand.foot;
    best.h = cand.h;
  }

  for (int ei = 0; ei < static_cast<int>(P.edges.size()); ++ei) {
    const HullEdge& e = P.edges[ei];
    Candidate cand = edge_candidate(z.z, P.vertices[e.v0], P.vertices[e.v1]);
    // Ties between a face tangency and an edge resolve to the edge.
    if (!cand.valid || cand.h > best.h + 1e-12) continue;
    H3Point chart_pt = D.dome.charts[e.left].to_chart(cand.foot);
    best.kind = RetractionResult::Support::edge;
    best.support_id = ei;
    best.foot = DomePoint{e.left, cplx(chart_pt.x.real(), chart_pt.t)};
    best.foot_ambient = cand.foot;
    best.h = cand.h;
  }

  if (!std::isfinite(best.h))
    throw Error(ErrorCode::degenerate, "retract: no supporting candidate found");
  return best;
}

double thurston_density(const FiniteDomain& D, const ExtPoint& z) {
  if (!z.is_inf() && std::abs(z.z) < kFarThreshold) return 1.0 / retract(D, z).h;
  // Conformal naturality through the chart w = 1/(z - x0).
  cplx x0{0, 0};
  bool found = false;
  for (const auto& p : D.points) {
    if (p.is_inf()) continue;
    if (!z.is_inf() && std::abs(p.z - z.z) < 1.0) continue;
    x0 = p.z;
    found = true;
    break;
  }
  if (!found) throw Error(ErrorCode::degenerate, "thurston_density: no usable chart center");
  MobiusMap m(0, 1, 1, -x0);  // w = 1/(z - x0)
  std::vector<ExtPoint> Xm(D.points.size());
  for (size_t i = 0; i < D.points.size(); ++i) Xm[i] = m(D.points[i]);
  FiniteDomain Dm = FiniteDomain::create(Xm);
  ExtPoint zm = m(z);
  double tau_m = 1.0 / retract(Dm, zm).h;
  if (z.is_inf())
    throw Error(ErrorCode::invalid_input, "thurston_density: z = inf has no planar density");
  return tau_m * m.deriv_abs(z.z);
}

namespace {

// After normalizing the edge to (0, inf), each adjacent disk becomes a half
// plane {Im(e^{-i beta} w) > 0}; beta from a third support-circle point.
double halfplane_angle(const MobiusMap& N, const FiniteDomain& D, int face, int v0, int v1) {
  const HullFace& f = D.hull.faces[face];
  ExtPoint third;
  bool found = false;
  for (int v : f.vertices) {
    if (v == v0 || v == v1) continue;
    third = D.points[v];
    found = true;
    break;
  }
  if (!found) throw Error(ErrorCode::degenerate, "bigon normalizer: face has only two vertices");
  ExtPoint w = N(third);
  if (w.is_inf()) throw Error(ErrorCode::degenerate, "bigon normalizer: third point at infinity");
  double beta = std::arg(w.z);
  ExtPoint s = N(f.circle.disk_sample());
  if (s.is_inf()) throw Error(ErrorCode::degenerate, "bigon normalizer: sample at infinity");
  if (std::imag(std::exp(cplx(0, -beta)) * s.z) < 0) beta += std::numbers::pi;
  return beta;
}

}  // namespace

CellDecomposition cell_decomposition(const FiniteDomain& D) {
  CellDecomposition C;
  const IdealPolyhedron& P = D.hull;
  for (int f = 0; f < static_cast<int>(P.faces.size()); ++f)
    C.faces.push_back({f, P.faces[f].circle});

  const double twopi = 2.0 * std::numbers::pi;
  for (int ei = 0; ei < static_cast<int>(P.edges.size()); ++ei) {
    const HullEdge& e = P.edges[ei];
    const ExtPoint& p = P.vertices[e.v0];
    const ExtPoint& q = P.vertices[e.v1];
    // N sends the edge endpoints to (0, inf).
    MobiusMap N = [&] {
      if (p.is_inf()) return MobiusMap(0, 1, 1, -q.z);
      if (q.is_inf()) return MobiusMap(1, -p.z, 0, 1);
      return MobiusMap(1, -p.z, 1, -q.z);
    }();
    double bl = halfplane_angle(N, D, e.left, e.v0, e.v1);
    double br = halfplane_angle(N, D, e.right, e.v0, e.v1);
    double rl = bl + 0.5 * std::numbers::pi;  // perpendicular ray into the left disk
    double rr = br + 0.5 * std::numbers::pi;

    // The bigon is the sector between the two perpendicular rays whose width
    // matches the exterior dihedral angle.
    auto mod2pi = [&](double a) { return a - twopi * std::floor(a / twopi); };
    double wA = mod2pi(rl - rr);  // sweep from rr CCW
    double wB = twopi - wA;
    double start, width;
    BigonCell b;
    if (std::abs(wA - e.theta) <= std::abs(wB - e.theta)) {
      start = rr;
      width = wA;
      b.face_at_zero = e.right;
      b.face_at_theta = e.left;
    } else {
      start = rl;
      width = wB;
      b.face_at_zero = e.left;
      b.face_at_theta = e.right;
    }
    if (std::abs(width - e.theta) > 1e-6)
      throw Error(ErrorCode::degenerate, "cell_decomposition: bigon width mismatch");
    cplx rot = std::exp(cplx(0, -start));
    b.edge = ei;
    b.theta = e.theta;
    b.to_sector = MobiusMap(rot * N.a, rot * N.b, N.c, N.d);
    C.bigons.push_back(b);
  }
  return C;
}

double face_cell_density(const FiniteDomain& D, int face, const ExtPoint& z) {
  if (z.is_inf()) throw Error(ErrorCode::invalid_input, "face_cell_density: z = inf");
  const GenCircle& c = D.hull.faces[face].circle;
  if (c.kind == GenCircle::Kind::circle) {
    double d2 = std::norm(z.z - c.center);
    return 2.0 * c.radius / std::abs(c.radius * c.radius - d2);
  }
  double dist = std::abs(std::real(std::conj(c.normal) * z.z) - c.offset);
  return 1.0 / dist;
}

double bigon_density(const CellDecomposition& C, int bigon, const ExtPoint& z) {
  if (z.is_inf()) throw Error(ErrorCode::invalid_input, "bigon_density: z = inf");
  const MobiusMap& f = C.bigons[bigon].to_sector;
  ExtPoint w = f(z);
  if (w.is_inf()) throw Error(ErrorCode::invalid_input, "bigon_density: z maps to infinity");
  return f.deriv_abs(z.z) / std::abs(w.z);
}

bool in_face_cell(const FiniteDomain& D, int face, const ExtPoint& z) {
  if (!D.hull.faces[face].circle.on_disk_side(z)) return false;
  ExtPoint w = D.dome.charts[face].to_chart(z);
  if (w.is_inf()) return false;
  return D.dome.contains(DomePoint{face, w.z}, 1e-9);
}

bool in_bigon(const CellDecomposition& C, int bigon, const ExtPoint& z) {
  const BigonCell& b = C.bigons[bigon];
  ExtPoint w = b.to_sector(z);
  if (w.is_inf()) return false;
  double a = std::arg(w.z);
  return a > 0 && a < b.theta;
}

double integrate_density(const std::function<double(cplx)>& density,
                         const std::function<cplx(double)>& gamma,
                         const std::function<double(double)>& speed, double t0, double t1,
                         double tol) {
  auto f = [&](double t) { return density(gamma(t)) * speed(t); };
  auto simpson = [](double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  };

  double total = 0;
  // Frames: (a, b, fa, fm, fb, whole, eps, depth); eps halves per split.
  std::vector<std::tuple<double, double, double, double, double, double, double, int>> stack;
  double fa = f(t0), fb = f(t1), fm = f(0.5 * (t0 + t1));
  stack.push_back({t0, t1, fa, fm, fb, simpson(t0, t1, fa, fm, fb), tol, 0});
  while (!stack.empty()) {
    auto [a, b, va, vm, vb, whole, eps, depth] = stack.back();
    stack.pop_back();
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m));
    double frm = f(0.5 * (m + b));
    double left = simpson(a, m, va, flm, vm);
    double right = simpson(m, b, vm, frm, vb);
    if (depth >= 30 || std::abs(left + right - whole) < 15.0 * eps) {
      total += left + right + (left + right - whole) / 15.0;
    } else {
      stack.push_back({a, m, va, flm, vm, left, 0.5 * eps, depth + 1});
      stack.push_back({m, b, vm, frm, vb, right, 0.5 * eps, depth + 1});
    }
  }
  return total;
}

PullbackResult pullback_path(const FiniteDomain& D, const DomePath& path, double quad_tol) {
  PullbackResult out;
  out.l_tau_structural = path.l_h + intersection_number(path);

  CellDecomposition C = cell_decomposition(D);
  auto tau = [&](cplx z) { return thurston_density(D, ExtPoint(z)); };

  double quad = 0;

  for (size_t i = 0; i < path.segments.size(); ++i) {
    const PathSegment& seg = path.segments[i];
    if (seg.length > 1e-13) {
      PlanarArc arc;
      arc.kind = PlanarArc::Kind::face_segment;
      arc.face = seg.face;
      arc.a = seg.a;
      arc.b = seg.b;
      out.arcs.push_back(arc);

      ExtPoint eb, ef;
      h2::geodesic_through(seg.a, seg.b, eb, ef);
      h2::RealMobius M = h2::normalizer_to_axis(eb, ef);
      h2::RealMobius Minv = M.inverse();
      double u0 = std::log(M(seg.a).imag());
      double u1 = std::log(M(seg.b).imag());
      const MobiusMap& back = D.dome.charts[seg.face].from_chart;
      auto gamma = [&](double u) {
        cplx w = Minv(cplx(0.0, std::exp(u)));
        ExtPoint p = back(ExtPoint(w));
        if (p.is_inf()) throw Error(ErrorCode::degenerate, "pullback: arc through infinity");
        return p.z;
      };
      auto speed = [&](double u) {
        double s = std::exp(u);
        cplx w = Minv(cplx(0.0, s));
        return back.deriv_abs(w) * Minv.deriv_abs(cplx(0.0, s)) * s;
      };
      quad += integrate_density(tau, gamma, speed, std::min(u0, u1), std::max(u0, u1), quad_tol);
    }
    if (i < path.crossings.size()) {
      const PathCrossing& cr = path.crossings[i];
      const BigonCell& b = C.bigons[cr.edge];
      // Planar crossing point on the entry boundary ray of the bigon.
      ExtPoint planar = D.dome.charts[cr.face_before].from_chart(ExtPoint(cr.point_before));
      if (planar.is_inf()) throw Error(ErrorCode::degenerate, "pullback: crossing at infinity");
      ExtPoint w = b.to_sector(planar);
      if (w.is_inf()) throw Error(ErrorCode::degenerate, "pullback: crossing maps to infinity");
      double s = std::abs(w.z);
      double t_at = std::arg(w.z);
      bool from_zero = t_at < 0.5 * b.theta;
      PlanarArc arc;
      arc.kind = PlanarArc::Kind::bigon_arc;
      arc.edge = cr.edge;
      arc.s = s;
      arc.t0 = from_zero ? 0.0 : b.theta;
      arc.t1 = from_zero ? b.theta : 0.0;
      out.arcs.push_back(arc);

      MobiusMap inv = b.to_sector.inverse();
      auto gamma = [&](double t) {
        ExtPoint p = inv(ExtPoint(s * std::exp(cplx(0, t))));
        if (p.is_inf()) throw Error(ErrorCode::degenerate, "pullback: bigon arc through infinity");
        return p.z;
      };
      auto speed = [&](double t) { return inv.deriv_abs(s * std::exp(cplx(0, t))) * s; };
      quad += integrate_density(tau, gamma, speed, std::min(arc.t0, arc.t1),
                                std::max(arc.t0, arc.t1), quad_tol);
    }
  }
  out.l_tau_quadrature = quad;
  return out;
}

namespace {

void emit_path(std::ostringstream& os, const std::vector<cplx>& pts, const SvgViewport& vp,
               const char* cls) {
  auto tx = [&](const cplx& z) { return (z.real() - vp.x) * vp.scale; };
  auto ty = [&](const cplx& z) { return (vp.y + vp.height - z.imag()) * vp.scale; };
  double lim = 10.0 * std::max(vp.width, vp.height);
  os << "  <path class=\"" << cls << "\" d=\"";
  bool pen_up = true;
  for (const auto& z : pts) {
    if (std::abs(z.real() - vp.x) > lim || std::abs(z.imag() - vp.y) > lim) {
      pen_up = true;
      continue;
    }
    os << (pen_up ? "M" : "L") << tx(z) << " " << ty(z) << " ";
    pen_up = false;
  }
  os << "\"/>\n";
}

}  // namespace

std::string svg_export(const FiniteDomain& D, const CellDecomposition& C, const SvgViewport& vp) {
  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << vp.width * vp.scale
     << "\" height=\"" << vp.height * vp.scale << "\">\n";
  os << "  <style>.face{fill:none;stroke:#26547c;stroke-width:1.2}"
     << ".bigon{fill:none;stroke:#ef476f;stroke-width:1.0}</style>\n";

  const int kSamples = 160;
  // Face cells: sampled boundary polylines of each side geodesic.
  for (const auto& fc : C.faces) {
    const DomeSurface::Chart& ch = D.dome.charts[fc.face];
    const int m = static_cast<int>(ch.corner.size());
    std::vector<cplx> pts;
    for (int i = 0; i < m; ++i) {
      h2::RealMobius M = h2::normalizer_to_axis(ch.corner[i], ch.corner[(i + 1) % m]);
      h2::RealMobius Minv = M.inverse();
      for (int j = 1; j < kSamples; ++j) {
        double u = -8.0 + 16.0 * j / kSamples;
        ExtPoint p = ch.from_chart(ExtPoint(Minv(cplx(0.0, std::exp(u)))));
        if (!p.is_inf()) pts.push_back(p.z);
      }
    }
    emit_path(os, pts, vp, "face");
  }
  // Bigons: the two boundary rays, pulled back.
  for (const auto& b : C.bigons) {
    MobiusMap inv = b.to_sector.inverse();
    std::vector<cplx> pts;
    for (double t : {0.0, b.theta}) {
      for (int j = 1; j < kSamples; ++j) {
        double u = -8.0 + 16.0 * j / kSamples;
        ExtPoint p = inv(ExtPoint(std::exp(u) * std::exp(cplx(0, t))));
        if (!p.is_inf()) pts.push_back(p.z);
      }
    }
    emit_path(os, pts, vp, "bigon");
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace domeforge
