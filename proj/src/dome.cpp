#include "domeforge/dome.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <unordered_set>

namespace domeforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior sample point of every chart polygon: the chart anchors are three
// polygon vertices mapped to 0, 1, inf, and a convex ideal polygon contains
// the ideal triangle spanned by any three of its vertices.
const cplx kChartSample{0.5, 1.0};

cplx tangent_up(const h2::RealMobius& from_axis, double s) {
  // Direction of u -> from_axis(i e^u) at height s.
  cplx z(0.0, s);
  cplx der = (from_axis.a * from_axis.d - from_axis.b * from_axis.c) /
             ((from_axis.c * z + from_axis.d) * (from_axis.c * z + from_axis.d));
  return der * cplx(0.0, 1.0);
}

// Crossing of the geodesic (p, q) with the vertical axis (0, inf),
// in log-height coordinate. Returns false if disjoint or asymptotic.
bool cross_axis(const ExtPoint& p, const ExtPoint& q, double& u, double& angle) {
  if (p.is_inf() || q.is_inf()) return false;  // vertical line: parallel or equal
  double x = p.re(), y = q.re();
  if (x == 0.0 || y == 0.0) return false;
  if ((x < 0) == (y < 0)) return false;
  double s = std::sqrt(-x * y);
  u = std::log(s);
  double mid = 0.5 * std::abs(x + y);
  double rad = 0.5 * std::abs(y - x);
  angle = std::acos(std::clamp(mid / rad, 0.0, 1.0));
  return true;
}

struct StateKey {
  int face;
  long long q[4];
  bool operator==(const StateKey& o) const {
    return face == o.face && q[0] == o.q[0] && q[1] == o.q[1] && q[2] == o.q[2] && q[3] == o.q[3];
  }
};

struct StateKeyHash {
  size_t operator()(const StateKey& k) const {
    size_t h = std::hash<int>()(k.face);
    for (long long v : k.q) h = h * 1000003u + std::hash<long long>()(v);
    return h;
  }
};

StateKey make_key(int face, const h2::RealMobius& T) {
  h2::RealMobius n = T.normalized();
  auto enc = [](double x) {
    double c = std::clamp(x, -9e9, 9e9);
    return static_cast<long long>(std::llround(c * 1e8));
  };
  return StateKey{face, {enc(n.a), enc(n.b), enc(n.c), enc(n.d)}};
}

bool is_identity(const h2::RealMobius& T, double tol = 1e-6) {
  h2::RealMobius n = T.normalized();
  return std::abs(n.a - 1) < tol && std::abs(n.b) < tol && std::abs(n.c) < tol &&
         std::abs(n.d - 1) < tol;
}

}  // namespace

int DomeSurface::other_face(int edge, int face) const {
  const HullEdge& e = hull.edges[edge];
  return e.left == face ? e.right : e.left;
}

void DomeSurface::edge_in_chart(int edge, int face, ExtPoint& p0, ExtPoint& p1) const {
  const HullEdge& e = hull.edges[edge];
  if (face == e.left) {
    p0 = edge_charts[edge].l0;
    p1 = edge_charts[edge].l1;
  } else {
    p0 = edge_charts[edge].r0;
    p1 = edge_charts[edge].r1;
  }
}

h2::RealMobius DomeSurface::gluing(int edge, int from_face) const {
  return from_face == hull.edges[edge].left ? edge_charts[edge].lr : edge_charts[edge].rl;
}

ExtPoint DomeSurface::corner_of(int face, int vertex) const {
  const Chart& ch = charts[face];
  for (size_t i = 0; i < ch.cycle.size(); ++i)
    if (ch.cycle[i] == vertex) return ch.corner[i];
  throw Error(ErrorCode::invalid_input, "corner_of: vertex not on face");
}

bool DomeSurface::contains(const DomePoint& p, double tol) const {
  const Chart& ch = charts[p.face];
  const int m = static_cast<int>(ch.corner.size());
  for (int i = 0; i < m; ++i) {
    double sv = h2::side_value(p.z, ch.corner[i], ch.corner[(i + 1) % m]);
    if (ch.side_sign[i] * sv < -tol) return false;
  }
  return true;
}

H3Point DomeSurface::ambient(const DomePoint& p) const {
  return charts[p.face].from_chart(H3Point(cplx(p.z.real(), 0.0), p.z.imag()));
}

DomeSurface develop(const IdealPolyhedron& P) {
  DomeSurface S;
  S.hull = P;
  const int F = static_cast<int>(P.faces.size());
  S.charts.resize(F);

  for (int f = 0; f < F; ++f) {
    const HullFace& face = P.faces[f];
    DomeSurface::Chart& ch = S.charts[f];
    ch.cycle = face.vertices;
    const int m = static_cast<int>(ch.cycle.size());

    // Anchor three spread-out cycle vertices to (0, 1, inf).
    int ia = 0, ib = m / 3, ic = (2 * m) / 3;
    if (ib == ia) ib = 1;
    if (ic == ib || ic == ia) ic = (ib + 1) % m;
    MobiusMap to_chart = MobiusMap::three_point(P.vertices[ch.cycle[ia]],
                                                P.vertices[ch.cycle[ib]],
                                                P.vertices[ch.cycle[ic]]);
    ExtPoint sample = face.circle.disk_sample();
    ExtPoint w = to_chart(sample);
    if (w.is_inf() || w.im() < 0) {
      // Post-compose with z -> 1 - z (real, orientation-reversing) to land in H^2.
      to_chart = MobiusMap(-1, 1, 0, 1) * to_chart;
      w = to_chart(sample);
    }
    if (w.is_inf() || w.im() <= 0)
      throw Error(ErrorCode::degenerate, "develop: chart orientation failed");
    ch.to_chart = to_chart;
    ch.from_chart = to_chart.inverse();

    ch.corner.resize(m);
    for (int i = 0; i < m; ++i) {
      ExtPoint c = to_chart(P.vertices[ch.cycle[i]]);
      if (!c.is_inf()) {
        if (std::abs(c.im()) > 1e-6 * std::max(1.0, std::abs(c.re())))
          throw Error(ErrorCode::degenerate, "develop: face vertex off the chart boundary");
        c = ExtPoint(c.re(), 0.0);
      }
      ch.corner[i] = c;
    }

    ch.side_edge.assign(m, -1);
    ch.side_sign.assign(m, 1.0);
    for (int i = 0; i < m; ++i) {
      int a = ch.cycle[i], b = ch.cycle[(i + 1) % m];
      const HullEdge* e = P.find_edge(a, b);
      if (!e) throw Error(ErrorCode::degenerate, "develop: face side is not a hull edge");
      ch.side_edge[i] = static_cast<int>(e - P.edges.data());
      double sv = h2::side_value(kChartSample, ch.corner[i], ch.corner[(i + 1) % m]);
      ch.side_sign[i] = sv >= 0 ? 1.0 : -1.0;
    }
  }

  // Gluings from the shared-edge identification in H^3.
  const int E = static_cast<int>(P.edges.size());
  S.edge_charts.resize(E);
  for (int ei = 0; ei < E; ++ei) {
    const HullEdge& e = P.edges[ei];
    DomeSurface::EdgeCharts& ec = S.edge_charts[ei];
    ec.l0 = S.charts[e.left].to_chart(P.vertices[e.v0]);
    ec.l1 = S.charts[e.left].to_chart(P.vertices[e.v1]);
    ec.r0 = S.charts[e.right].to_chart(P.vertices[e.v0]);
    ec.r1 = S.charts[e.right].to_chart(P.vertices[e.v1]);
    auto flatten = [](ExtPoint p) { return p.is_inf() ? p : ExtPoint(p.re(), 0.0); };
    ec.l0 = flatten(ec.l0); ec.l1 = flatten(ec.l1);
    ec.r0 = flatten(ec.r0); ec.r1 = flatten(ec.r1);

    // Interior point of the edge geodesic in H^3.
    const ExtPoint& pv0 = P.vertices[e.v0];
    const ExtPoint& pv1 = P.vertices[e.v1];
    H3Point mid;
    if (pv0.is_inf())
      mid = H3Point(pv1.z, 1.0);
    else if (pv1.is_inf())
      mid = H3Point(pv0.z, 1.0);
    else
      mid = H3Point(0.5 * (pv0.z + pv1.z), 0.5 * std::abs(pv1.z - pv0.z));

    H3Point mL = S.charts[e.left].to_chart(mid);
    H3Point mR = S.charts[e.right].to_chart(mid);
    if (std::abs(mL.x.imag()) > 1e-7 || std::abs(mR.x.imag()) > 1e-7)
      throw Error(ErrorCode::degenerate, "develop: edge midpoint off the chart plane");
    cplx zL(mL.x.real(), mL.t);
    cplx zR(mR.x.real(), mR.t);

    h2::RealMobius A = h2::normalizer_to_axis(ec.l0, ec.l1);
    h2::RealMobius B = h2::normalizer_to_axis(ec.r0, ec.r1);
    double s1 = A(zL).imag();
    double s2 = B(zR).imag();
    double lam = std::sqrt(s2 / s1);
    h2::RealMobius scale(lam, 0, 0, 1.0 / lam, false);
    ec.lr = (B.inverse() * scale * A).normalized();
    ec.rl = ec.lr.inverse().normalized();

    // Gluing invariant: the left polygon must land on the far side of the
    // edge from the right polygon.
    double sl = h2::side_value(ec.lr(kChartSample), ec.r0, ec.r1);
    double sr = h2::side_value(kChartSample, ec.r0, ec.r1);
    if (sl * sr > 0)
      throw Error(ErrorCode::degenerate, "develop: inconsistent chart orientations at an edge");
  }

  return S;
}

double max_holonomy_defect(const DomeSurface& S) {
  const IdealPolyhedron& P = S.hull;
  double worst = 0;
  for (int v = 0; v < static_cast<int>(P.vertices.size()); ++v) {
    auto eids = P.edges_at_vertex(v);
    if (eids.empty()) continue;
    int e0 = eids[0];
    int f0 = P.edges[e0].left;
    // Walk the face fan around v, composing gluings chart-to-chart.
    h2::RealMobius H;  // identity
    int face = f0, entry = e0;
    const int guard = 4 * static_cast<int>(eids.size()) + 4;
    int steps = 0;
    do {
      // The two sides of `face` at v; exit over the one that is not the entry.
      const DomeSurface::Chart& ch = S.charts[face];
      int m = static_cast<int>(ch.cycle.size());
      int exit = -1;
      for (int i = 0; i < m; ++i) {
        int a = ch.cycle[i], b = ch.cycle[(i + 1) % m];
        if (a != v && b != v) continue;
        int eid = ch.side_edge[i];
        if (eid == entry) continue;
        exit = eid;
      }
      if (exit < 0) throw Error(ErrorCode::degenerate, "holonomy walk: no exit edge");
      int next = S.other_face(exit, face);
      // Points of the fresh chart map into the previous frame.
      H = H * S.gluing(exit, next);
      face = next;
      entry = exit;
      ++steps;
    } while (!(face == f0 && entry == e0) && steps < guard);
    if (steps >= guard) throw Error(ErrorCode::degenerate, "holonomy walk: did not close");

    h2::RealMobius N = H.normalized();
    double defect = std::abs(std::abs(N.trace()) - 2.0);
    ExtPoint cv = S.corner_of(f0, v);
    ExtPoint img = N.boundary(cv);
    defect += chordal(cv, img);  // robust also when the corner sits at infinity
    worst = std::max(worst, defect);
  }
  return worst;
}

DomePath shoot_geodesic(const DomeSurface& S, const DomePoint& x, double theta, double length) {
  if (!(length >= 0)) throw Error(ErrorCode::invalid_input, "shoot_geodesic: bad length");
  DomePath path;
  int face = x.face;
  cplx z = x.z;
  double th = theta;
  double remaining = length;
  int entry_edge = -1;

  // A start point sitting on an edge and aiming across it belongs to the far
  // chart; transfer before walking (an endpoint on an edge is not a crossing).
  for (int guard = 0; guard < 3; ++guard) {
    ExtPoint eb, ef;
    h2::geodesic_ray(z, th, eb, ef);
    h2::RealMobius M = h2::normalizer_to_axis(eb, ef);
    h2::RealMobius Minv = M.inverse();
    double u0 = std::log(M(z).imag());
    cplx probe = Minv(cplx(0.0, std::exp(u0 + 1e-9)));
    const DomeSurface::Chart& ch = S.charts[face];
    const int m = static_cast<int>(ch.corner.size());
    int bad_side = -1;
    for (int i = 0; i < m; ++i) {
      double sv = h2::side_value(probe, ch.corner[i], ch.corner[(i + 1) % m]);
      if (ch.side_sign[i] * sv < -1e-14 &&
          std::abs(h2::side_value(z, ch.corner[i], ch.corner[(i + 1) % m])) < 1e-8) {
        bad_side = i;
        break;
      }
    }
    if (bad_side < 0) break;
    int eid = ch.side_edge[bad_side];
    h2::RealMobius g = S.gluing(eid, face);
    cplx v = tangent_up(Minv, std::exp(u0));
    cplx gd = (g.a * g.d - g.b * g.c) / ((g.c * z + g.d) * (g.c * z + g.d));
    th = std::arg(gd * v);
    z = g(z);
    face = S.other_face(eid, face);
    entry_edge = eid;
  }

  for (int step = 0; step < 100000; ++step) {
    ExtPoint eb, ef;
    h2::geodesic_ray(z, th, eb, ef);
    h2::RealMobius M = h2::normalizer_to_axis(eb, ef);
    h2::RealMobius Minv = M.inverse();
    double s0 = M(z).imag();
    double u0 = std::log(s0);

    const DomeSurface::Chart& ch = S.charts[face];
    const int m = static_cast<int>(ch.corner.size());
    double best_u = kInf;
    int best_side = -1;
    double best_angle = 0;
    for (int i = 0; i < m; ++i) {
      if (ch.side_edge[i] == entry_edge) continue;
      ExtPoint p = M.boundary(ch.corner[i]);
      ExtPoint q = M.boundary(ch.corner[(i + 1) % m]);
      double u, ang;
      if (!cross_axis(p, q, u, ang)) continue;
      if (u <= u0 + 1e-11) continue;
      if (u < best_u) { best_u = u; best_side = i; best_angle = ang; }
    }

    double u_end = u0 + remaining;
    if (best_side < 0 || u_end <= best_u + 1e-12) {
      cplx zend = Minv(cplx(0.0, std::exp(u_end)));
      path.segments.push_back({face, z, zend, remaining});
      path.l_h += remaining;
      return path;
    }

    double s_cross = std::exp(best_u);
    cplx zc = Minv(cplx(0.0, s_cross));
    double seg = best_u - u0;
    path.segments.push_back({face, z, zc, seg});
    path.l_h += seg;
    int eid = ch.side_edge[best_side];
    if (best_angle < 1e-9)
      throw Error(ErrorCode::non_transverse, "shoot_geodesic: path runs along an edge");
    path.crossings.push_back({eid, face, zc, best_angle, S.hull.edges[eid].theta});

    int next = S.other_face(eid, face);
    h2::RealMobius g = S.gluing(eid, face);
    cplx v = tangent_up(Minv, s_cross);
    cplx zc2 = g(zc);
    cplx gd = (g.a * g.d - g.b * g.c) / ((g.c * zc + g.d) * (g.c * zc + g.d));
    th = std::arg(gd * v);
    z = zc2;
    face = next;
    remaining -= seg;
    entry_edge = eid;
  }
  throw Error(ErrorCode::budget_exhausted, "shoot_geodesic: too many crossings");
}

double intersection_number(const DomePath& path) {
  double total = 0;
  for (const auto& c : path.crossings) {
    if (c.angle < 1e-9)
      throw Error(ErrorCode::non_transverse, "intersection_number: non-transverse crossing");
    total += c.theta;
  }
  return total;
}

namespace {

struct SearchState {
  int face;
  h2::RealMobius T;  // chart(face) -> base frame
  double bound;
  int entry_edge;
};

double direction_towards(const cplx& z, const cplx& w) {
  ExtPoint eb, ef;
  h2::geodesic_through(z, w, eb, ef);
  h2::RealMobius M = h2::normalizer_to_axis(eb, ef);
  double s = M(z).imag();
  return std::arg(tangent_up(M.inverse(), s));
}

}  // namespace

GeodesicResult geodesic_distance(const DomeSurface& S, const DomePoint& a, const DomePoint& b,
                                 SearchBudget budget) {
  GeodesicResult res;
  if (a.face == b.face && std::abs(a.z - b.z) < 1e-14) {
    res.distance = 0;
    res.path.segments.push_back({a.face, a.z, a.z, 0.0});
    res.certified = true;
    return res;
  }

  H3Point amb_a = S.ambient(a);
  double best = kInf;
  DomePath best_path;
  bool have_path = false;

  H3Point amb_b = S.ambient(b);
  auto try_candidate = [&](const h2::RealMobius& T) {
    cplx w = T(b.z);
    double L = h2::dist(a.z, w);
    if (L >= best - 1e-13) return;
    double th = direction_towards(a.z, w);
    DomePath p;
    try {
      p = shoot_geodesic(S, a, th, L);
    } catch (const Error&) {
      return;
    }
    // Compare ambient positions: the endpoint may sit on an edge, where the
    // shoot reports the chart on the near side while b is carried by the far
    // face.
    const PathSegment& last = p.segments.back();
    H3Point end = S.ambient(DomePoint{last.face, last.b});
    if (h3_distance(end, amb_b) > 1e-7) return;
    best = L;
    best_path = std::move(p);
    have_path = true;
  };

  using QEntry = std::pair<double, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
  std::vector<SearchState> pool;
  std::unordered_set<StateKey, StateKeyHash> seen;

  pool.push_back({a.face, h2::RealMobius(), 0.0, -1});
  seen.insert(make_key(a.face, pool[0].T));
  pq.push({0.0, 0});

  int pops = 0;
  bool budget_exceeded = false;
  while (!pq.empty()) {
    auto [bound, idx] = pq.top();
    pq.pop();
    if (bound >= best - 1e-12) break;
    if (++pops > budget.max_pops) {
      budget_exceeded = true;
      break;
    }
    SearchState st = pool[idx];

    if (st.face == b.face) try_candidate(st.T);

    const DomeSurface::Chart& ch = S.charts[st.face];
    const int m = static_cast<int>(ch.corner.size());
    for (int i = 0; i < m; ++i) {
      int eid = ch.side_edge[i];
      if (eid == st.entry_edge) continue;
      ExtPoint P0 = st.T.boundary(ch.corner[i]);
      ExtPoint P1 = st.T.boundary(ch.corner[(i + 1) % m]);
      double bc;
      try {
        bc = h2::dist_to_geodesic(a.z, P0, P1);
      } catch (const Error&) {
        continue;
      }
      const HullEdge& e = S.hull.edges[eid];
      double ba = h3_dist_to_geodesic(amb_a, S.hull.vertices[e.v0], S.hull.vertices[e.v1]);
      double nb = std::max({st.bound, bc, ba});
      if (nb >= best - 1e-12) continue;
      int f2 = S.other_face(eid, st.face);
      h2::RealMobius T2 = (st.T * S.gluing(eid, f2)).normalized();
      StateKey key = make_key(f2, T2);
      if (!seen.insert(key).second) continue;
      pool.push_back({f2, T2, nb, eid});
      pq.push({nb, static_cast<int>(pool.size()) - 1});
    }
  }

  if (!have_path)
    throw Error(ErrorCode::budget_exhausted, "geodesic_distance: no path found within budget");
  res.distance = best;
  res.path = best_path;
  res.certified = !budget_exceeded;
  return res;
}

namespace {

// Canonical key of a cyclic edge word, up to rotation and reversal.
std::string cycle_key(const std::vector<int>& cyc) {
  const int n = static_cast<int>(cyc.size());
  std::string best;
  auto encode = [&](const std::vector<int>& w, int shift, bool rev) {
    std::string s;
    for (int i = 0; i < n; ++i) {
      int j = rev ? (shift - i % n + 2 * n) % n : (shift + i) % n;
      s += std::to_string(w[j]);
      s += ',';
    }
    return s;
  };
  for (int r = 0; r < n; ++r) {
    for (bool rev : {false, true}) {
      std::string s = encode(cyc, r, rev);
      if (best.empty() || s < best) best = s;
    }
  }
  return best;
}

bool is_primitive_word(const std::vector<int>& cyc) {
  const int n = static_cast<int>(cyc.size());
  for (int p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = 0; i < n && periodic; ++i)
      if (cyc[i] != cyc[i % p]) periodic = false;
    if (periodic) return false;
  }
  return true;
}

struct Holonomy {
  double length = 0;
  ExtPoint rep, att;  // axis endpoints (repelling -> attracting)
  bool hyperbolic = false;
};

Holonomy analyze(const h2::RealMobius& Hraw) {
  Holonomy out;
  h2::RealMobius H = Hraw.normalized();
  double tr = std::abs(H.trace());
  if (tr <= 2.0 + 1e-11) return out;
  out.hyperbolic = true;
  out.length = 2.0 * std::acosh(0.5 * tr);
  // Fixed points of (az+b)/(cz+d) = z.
  if (std::abs(H.c) < 1e-14) {
    // One fixed point at infinity; the other at b / (d - a).
    ExtPoint fin(H.b / (H.d - H.a), 0.0);
    // Derivative at the finite point: (a/d); attracting if |a/d| < 1.
    double da = std::abs(H.a / H.d);
    if (da < 1.0) { out.att = fin; out.rep = ExtPoint::inf(); }
    else          { out.rep = fin; out.att = ExtPoint::inf(); }
    return out;
  }
  double disc = H.trace() * H.trace() - 4.0;
  double sq = std::sqrt(std::max(0.0, disc));
  double x1 = (H.a - H.d + sq) / (2.0 * H.c);
  double x2 = (H.a - H.d - sq) / (2.0 * H.c);
  auto dabs = [&](double x) { return 1.0 / std::norm(cplx(H.c * x + H.d, 0.0)); };
  if (dabs(x1) < 1.0) { out.att = ExtPoint(x1, 0.0); out.rep = ExtPoint(x2, 0.0); }
  else                { out.att = ExtPoint(x2, 0.0); out.rep = ExtPoint(x1, 0.0); }
  return out;
}

// Check the axis crosses every unfolded edge geodesic, in order, within one
// period; fill crossing angles when valid.
bool validate_axis(const Holonomy& h,
                   const std::vector<std::pair<ExtPoint, ExtPoint>>& gchain,
                   std::vector<double>& angles) {
  h2::RealMobius N = h2::normalizer_to_axis(h.rep, h.att);
  angles.clear();
  double prev = -kInf;
  double first = 0;
  for (size_t i = 0; i < gchain.size(); ++i) {
    ExtPoint p = N.boundary(gchain[i].first);
    ExtPoint q = N.boundary(gchain[i].second);
    double u, ang;
    if (!cross_axis(p, q, u, ang)) return false;
    if (i == 0) first = u;
    if (u <= prev) return false;
    prev = u;
    angles.push_back(ang);
  }
  if (prev >= first + h.length - 1e-12) return false;
  return true;
}

}  // namespace

std::vector<ClosedGeodesic> closed_geodesics(const DomeSurface& S, double length_cap,
                                             CycleBudget budget) {
  std::vector<ClosedGeodesic> out;
  std::set<std::string> seen;
  const int E = static_cast<int>(S.hull.edges.size());

  struct DfsState {
    int face;
    h2::RealMobius T;
    int entry_edge;
    std::vector<int> chain;
    std::vector<std::pair<ExtPoint, ExtPoint>> gchain;
  };

  int expansions = 0;

  auto emit = [&](const h2::RealMobius& H, int start_face, const std::vector<int>& chain,
                  const std::vector<std::pair<ExtPoint, ExtPoint>>& gchain) {
    Holonomy h = analyze(H);
    if (!h.hyperbolic || h.length > length_cap) return;
    if (!is_primitive_word(chain)) return;
    std::string key = cycle_key(chain);
    if (seen.count(key)) return;
    std::vector<double> angles;
    if (!validate_axis(h, gchain, angles)) return;
    seen.insert(key);
    ClosedGeodesic g;
    g.length = h.length;
    g.start_face = start_face;
    g.edge_cycle = chain;
    g.angles = angles;
    g.inumber = 0;
    for (int e : chain) g.inumber += S.hull.edges[e].theta;
    out.push_back(std::move(g));
  };

  for (int e0 = 0; e0 < E; ++e0) {
    for (int dir = 0; dir < 2; ++dir) {
      int f1 = dir == 0 ? S.hull.edges[e0].right : S.hull.edges[e0].left;
      DfsState root;
      root.face = f1;
      root.entry_edge = e0;
      root.chain = {e0};
      ExtPoint p0, p1;
      S.edge_in_chart(e0, f1, p0, p1);
      root.gchain = {{p0, p1}};

      std::vector<DfsState> stack{root};
      while (!stack.empty()) {
        if (++expansions > budget.max_expansions) return out;
        DfsState st = std::move(stack.back());
        stack.pop_back();
        if (static_cast<int>(st.chain.size()) > budget.max_depth) continue;

        const DomeSurface::Chart& ch = S.charts[st.face];
        const int m = static_cast<int>(ch.corner.size());
        for (int i = 0; i < m; ++i) {
          int eid = ch.side_edge[i];
          if (eid == st.entry_edge) continue;
          ExtPoint q0 = st.T.boundary(ch.corner[i]);
          ExtPoint q1 = st.T.boundary(ch.corner[(i + 1) % m]);
          // Any closed geodesic through this chain is at least as long as the
          // gap between the first and current unfolded edges.
          double gap = h2::dist_between_geodesics(st.gchain[0].first, st.gchain[0].second, q0, q1);
          if (gap > length_cap) continue;
          int f2 = S.other_face(eid, st.face);
          h2::RealMobius T2 = (st.T * S.gluing(eid, f2)).normalized();
          if (eid == e0 && f2 == f1) {
            // Closed up: holonomy maps the fresh start chart to the base frame.
            emit(T2, f1, st.chain, st.gchain);
          }
          DfsState nx;
          nx.face = f2;
          nx.T = T2;
          nx.entry_edge = eid;
          nx.chain = st.chain;
          nx.chain.push_back(eid);
          nx.gchain = st.gchain;
          nx.gchain.emplace_back(q0, q1);
          stack.push_back(std::move(nx));
        }
      }
    }
  }

  std::sort(out.begin(), out.end(),
            [](const ClosedGeodesic& a, const ClosedGeodesic& b) { return a.length < b.length; });
  return out;
}

h2::RealMobius cycle_holonomy(const DomeSurface& S, int start_face,
                              const std::vector<int>& edge_cycle) {
  if (edge_cycle.empty())
    throw Error(ErrorCode::invalid_input, "cycle_holonomy: empty edge cycle");
  h2::RealMobius T;
  int face = start_face;
  const int k = static_cast<int>(edge_cycle.size());
  for (int i = 1; i <= k; ++i) {
    int eid = edge_cycle[i % k];
    int f2 = S.other_face(eid, face);
    T = (T * S.gluing(eid, f2)).normalized();
    face = f2;
  }
  if (face != start_face)
    throw Error(ErrorCode::invalid_input, "cycle_holonomy: cycle does not close");
  return T;
}

std::optional<ClosedGeodesic> geodesic_in_class(const DomeSurface& S,
                                                const std::vector<int>& face_cycle) {
  const int m = static_cast<int>(face_cycle.size());
  if (m < 2) return std::nullopt;
  h2::RealMobius T;
  std::vector<int> chain;
  std::vector<std::pair<ExtPoint, ExtPoint>> gchain;
  for (int i = 0; i < m; ++i) {
    int f = face_cycle[i];
    int f2 = face_cycle[(i + 1) % m];
    // Shared edge between consecutive faces.
    int eid = -1;
    for (int cand : S.hull.face_edge_ids(f))
      if (S.other_face(cand, f) == f2) { eid = cand; break; }
    if (eid < 0) return std::nullopt;
    ExtPoint p0, p1;
    S.edge_in_chart(eid, f, p0, p1);
    gchain.emplace_back(T.boundary(p0), T.boundary(p1));
    chain.push_back(eid);
    T = (T * S.gluing(eid, f2)).normalized();
  }
  Holonomy h = analyze(T);
  if (!h.hyperbolic) return std::nullopt;
  std::vector<double> angles;
  if (!validate_axis(h, gchain, angles)) return std::nullopt;
  ClosedGeodesic g;
  g.length = h.length;
  g.start_face = face_cycle[1 % m];
  g.edge_cycle = chain;
  g.angles = angles;
  g.inumber = 0;
  for (int e : chain) g.inumber += S.hull.edges[e].theta;
  return g;
}

InjectivityResult injectivity_radius(const DomeSurface& S, const DomePoint& x,
                                     SearchBudget budget) {
  InjectivityResult res;
  double upper = kInf;

  using QEntry = std::pair<double, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
  std::vector<SearchState> pool;
  std::unordered_set<StateKey, StateKeyHash> seen;
  pool.push_back({x.face, h2::RealMobius(), 0.0, -1});
  seen.insert(make_key(x.face, pool[0].T));
  pq.push({0.0, 0});

  int pops = 0;
  bool budget_exceeded = false;
  while (!pq.empty()) {
    auto [bound, idx] = pq.top();
    pq.pop();
    if (bound >= upper - 1e-12) break;
    if (++pops > budget.max_pops) {
      budget_exceeded = true;
      break;
    }
    SearchState st = pool[idx];

    if (st.face == x.face && !is_identity(st.T)) {
      double disp = h2::dist(x.z, st.T(x.z));
      // Numerically drifted trivial words displace by roundoff only (up to
      // ~1e-6 once thin-configuration charts blow coordinates up); genuine
      // classes move x by at least the systole, well above 1e-4 at the
      // separations the point generators allow.
      if (disp > 1e-4) upper = std::min(upper, 0.5 * disp);
    }

    const DomeSurface::Chart& ch = S.charts[st.face];
    const int m = static_cast<int>(ch.corner.size());
    for (int i = 0; i < m; ++i) {
      int eid = ch.side_edge[i];
      if (eid == st.entry_edge) continue;
      ExtPoint P0 = st.T.boundary(ch.corner[i]);
      ExtPoint P1 = st.T.boundary(ch.corner[(i + 1) % m]);
      double bc;
      try {
        bc = h2::dist_to_geodesic(x.z, P0, P1);
      } catch (const Error&) {
        continue;
      }
      double nb = std::max(st.bound, bc);
      if (nb >= upper - 1e-12) continue;
      int f2 = S.other_face(eid, st.face);
      h2::RealMobius T2 = (st.T * S.gluing(eid, f2)).normalized();
      StateKey key = make_key(f2, T2);
      if (!seen.insert(key).second) continue;
      pool.push_back({f2, T2, nb, eid});
      pq.push({nb, static_cast<int>(pool.size()) - 1});
    }
  }

  if (!std::isfinite(upper)) {
    // No loop found at all: either the budget is too small or the surface has
    // huge systole at x.
    res.upper = kInf;
    res.certified = false;
    return res;
  }
  res.upper = upper;
  res.certified = !budget_exceeded;
  return res;
}

}  // namespace domeforge
