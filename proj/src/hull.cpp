#include "domeforge/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace domeforge {

namespace {

struct V3 {
  double x = 0, y = 0, z = 0;
};
V3 v3(const SpherePoint& p) { return {p.x, p.y, p.z}; }
V3 operator-(const V3& a, const V3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3 operator+(const V3& a, const V3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
V3 operator*(const V3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(const V3& a, const V3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V3 cross(const V3& a, const V3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const V3& a) { return std::sqrt(dot(a, a)); }
V3 normalized(const V3& a) { return a * (1.0 / norm(a)); }

struct Tri {
  int a, b, c;
  V3 n;       // outward unit normal
  double h;   // plane offset
  bool alive = true;
};

// Incremental convex hull of points on the unit sphere. Coplanar points are
// treated as visible so every input ends up a hull vertex.
std::vector<Tri> incremental_hull(const std::vector<V3>& pts, double tol) {
  const int n = static_cast<int>(pts.size());

  // Seed tetrahedron: spread out four non-coplanar points.
  int i0 = 0, i1 = -1;
  double best = -1;
  for (int i = 1; i < n; ++i) {
    double d = norm(pts[i] - pts[i0]);
    if (d > best) { best = d; i1 = i; }
  }
  int i2 = -1;
  best = -1;
  for (int i = 0; i < n; ++i) {
    double d = norm(cross(pts[i1] - pts[i0], pts[i] - pts[i0]));
    if (d > best) { best = d; i2 = i; }
  }
  V3 nrm = normalized(cross(pts[i1] - pts[i0], pts[i2] - pts[i0]));
  int i3 = -1;
  best = -1;
  for (int i = 0; i < n; ++i) {
    double d = std::abs(dot(pts[i] - pts[i0], nrm));
    if (d > best) { best = d; i3 = i; }
  }
  if (best < tol) return {};  // coplanar configuration; caller handles the double

  auto make_tri = [&](int a, int b, int c, const V3& inside) {
    Tri t{a, b, c, {}, 0, true};
    t.n = normalized(cross(pts[b] - pts[a], pts[c] - pts[a]));
    t.h = dot(t.n, pts[a]);
    if (dot(t.n, inside) - t.h > 0) {  // flip so the inside is negative
      std::swap(t.b, t.c);
      t.n = t.n * -1.0;
      t.h = -t.h;
    }
    return t;
  };

  V3 centroid = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) * 0.25;
  std::vector<Tri> tris;
  tris.push_back(make_tri(i0, i1, i2, centroid));
  tris.push_back(make_tri(i0, i1, i3, centroid));
  tris.push_back(make_tri(i0, i2, i3, centroid));
  tris.push_back(make_tri(i1, i2, i3, centroid));

  std::set<int> used{i0, i1, i2, i3};
  const double vis_tol = tol;  // coplanar counts as visible

  for (int p = 0; p < n; ++p) {
    if (used.count(p)) continue;
    used.insert(p);
    std::vector<int> visible;
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      if (dot(tris[t].n, pts[p]) - tris[t].h > -vis_tol) visible.push_back(t);
    }
    if (visible.empty()) continue;  // numerically inside; sphere points should not get here

    // Horizon: directed edges of visible faces whose reverse is not visible.
    std::set<int> vis_set(visible.begin(), visible.end());
    std::map<std::pair<int, int>, int> edge_count;
    for (int t : visible) {
      std::array<std::pair<int, int>, 3> es = {{{tris[t].a, tris[t].b},
                                                {tris[t].b, tris[t].c},
                                                {tris[t].c, tris[t].a}}};
      for (auto& e : es) edge_count[{std::min(e.first, e.second), std::max(e.first, e.second)}]++;
    }
    for (int t : visible) tris[t].alive = false;
    for (int t : visible) {
      std::array<std::pair<int, int>, 3> es = {{{tris[t].a, tris[t].b},
                                                {tris[t].b, tris[t].c},
                                                {tris[t].c, tris[t].a}}};
      for (auto& e : es) {
        auto key = std::make_pair(std::min(e.first, e.second), std::max(e.first, e.second));
        if (edge_count[key] == 1) {
          // Horizon edge, oriented as in the dying face; new face keeps orientation.
          Tri nt{e.first, e.second, p, {}, 0, true};
          nt.n = normalized(cross(pts[nt.b] - pts[nt.a], pts[nt.c] - pts[nt.a]));
          nt.h = dot(nt.n, pts[nt.a]);
          if (dot(nt.n, centroid) - nt.h > 0) {
            std::swap(nt.b, nt.c);
            nt.n = nt.n * -1.0;
            nt.h = -nt.h;
          }
          tris.push_back(nt);
        }
      }
    }
  }

  std::vector<Tri> out;
  for (auto& t : tris)
    if (t.alive) out.push_back(t);
  return out;
}

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) { for (int i = 0; i < n; ++i) p[i] = i; }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

const HullEdge* IdealPolyhedron::find_edge(int a, int b) const {
  for (const auto& e : edges)
    if ((e.v0 == a && e.v1 == b) || (e.v0 == b && e.v1 == a)) return &e;
  return nullptr;
}

std::vector<int> IdealPolyhedron::edges_at_vertex(int v) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (edges[i].v0 == v || edges[i].v1 == v) out.push_back(i);
  return out;
}

std::vector<int> IdealPolyhedron::face_edge_ids(int f) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (edges[i].left == f || edges[i].right == f) out.push_back(i);
  return out;
}

IdealPolyhedron build_hull(const std::vector<ExtPoint>& X, double tol) {
  const int n = static_cast<int>(X.size());
  if (n < 3) throw Error(ErrorCode::invalid_input, "build_hull: need at least 3 points");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (chordal(X[i], X[j]) < 1e-8)
        throw Error(ErrorCode::degenerate, "build_hull: duplicate points");

  std::vector<V3> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = v3(to_sphere(X[i]));

  IdealPolyhedron P;
  P.vertices = X;

  auto tris = incremental_hull(pts, tol);

  if (tris.empty()) {
    // Concyclic configuration: the hull is flat; the dome is the double.
    P.doubled = true;
    V3 a = pts[0], b = pts[1];
    int k = 2;
    double best = -1;
    for (int i = 2; i < n; ++i) {
      double d = norm(cross(b - a, pts[i] - a));
      if (d > best) { best = d; k = i; }
    }
    V3 u = normalized(cross(b - a, pts[k] - a));
    double h = dot(u, a);
    if (h < 0) { u = u * -1.0; h = -h; }
    // Order points by angle in the plane.
    V3 c0 = u * h;
    V3 e1 = normalized(pts[0] - c0);
    V3 e2 = cross(u, e1);
    std::vector<std::pair<double, int>> ang(n);
    for (int i = 0; i < n; ++i) {
      V3 d = pts[i] - c0;
      ang[i] = {std::atan2(dot(d, e2), dot(d, e1)), i};
    }
    std::sort(ang.begin(), ang.end());
    std::vector<int> cycle(n), rcycle(n);
    for (int i = 0; i < n; ++i) cycle[i] = ang[i].second;
    for (int i = 0; i < n; ++i) rcycle[i] = cycle[n - 1 - i];

    HullFace f0;  // disk side {v.u > h}
    f0.vertices = cycle;
    f0.plane = {{u.x, u.y, u.z}, h};
    f0.circle = from_sphere_circle(f0.plane);
    HullFace f1;  // mirror, disk side {v.u < h}
    f1.vertices = cycle;  // identical vertex cycle on the mirror face
    f1.plane = {{-u.x, -u.y, -u.z}, -h};
    f1.circle = from_sphere_circle(f1.plane);
    P.faces = {f0, f1};
    for (int i = 0; i < n; ++i) {
      HullEdge e;
      e.v0 = cycle[i];
      e.v1 = cycle[(i + 1) % n];
      e.left = 0;
      e.right = 1;
      e.theta = std::numbers::pi;
      P.edges.push_back(e);
    }
    (void)rcycle;
    return P;
  }

  // Merge coplanar triangles across shared edges (4-point orientation test).
  const int T = static_cast<int>(tris.size());
  std::map<std::pair<int, int>, std::vector<int>> by_edge;
  for (int t = 0; t < T; ++t) {
    std::array<std::pair<int, int>, 3> es = {{{tris[t].a, tris[t].b},
                                              {tris[t].b, tris[t].c},
                                              {tris[t].c, tris[t].a}}};
    for (auto& e : es)
      by_edge[{std::min(e.first, e.second), std::max(e.first, e.second)}].push_back(t);
  }
  DSU dsu(T);
  for (auto& [e, ts] : by_edge) {
    if (ts.size() != 2) throw Error(ErrorCode::degenerate, "build_hull: non-manifold hull");
    const Tri& t1 = tris[ts[0]];
    const Tri& t2 = tris[ts[1]];
    int c1 = t1.a + t1.b + t1.c - e.first - e.second;
    int c2 = t2.a + t2.b + t2.c - e.first - e.second;
    double det = dot(pts[c2] - pts[e.first],
                     cross(pts[e.second] - pts[e.first], pts[c1] - pts[e.first]));
    if (std::abs(det) < tol) dsu.unite(ts[0], ts[1]);
  }

  std::map<int, std::vector<int>> groups;
  for (int t = 0; t < T; ++t) groups[dsu.find(t)].push_back(t);

  std::map<int, int> group_face;
  for (auto& [root, members] : groups) {
    HullFace f;
    // Plane: area-weighted normal average, then offset from member vertices.
    V3 nsum{0, 0, 0};
    std::set<int> vset;
    for (int t : members) {
      V3 w = cross(pts[tris[t].b] - pts[tris[t].a], pts[tris[t].c] - pts[tris[t].a]);
      nsum = nsum + w;
      vset.insert(tris[t].a);
      vset.insert(tris[t].b);
      vset.insert(tris[t].c);
    }
    V3 u = normalized(nsum);
    double h = 0;
    for (int v : vset) h += dot(u, pts[v]);
    h /= static_cast<double>(vset.size());
    f.plane = {{u.x, u.y, u.z}, h};
    f.circle = from_sphere_circle(f.plane);

    // Boundary cycle: directed edges used exactly once inside the group.
    std::set<int> mem(members.begin(), members.end());
    std::map<int, int> next;  // directed boundary edge a -> b
    for (int t : members) {
      std::array<std::pair<int, int>, 3> es = {{{tris[t].a, tris[t].b},
                                                {tris[t].b, tris[t].c},
                                                {tris[t].c, tris[t].a}}};
      for (auto& e : es) {
        auto key = std::make_pair(std::min(e.first, e.second), std::max(e.first, e.second));
        auto& ts = by_edge[key];
        int other = ts[0] == t ? (ts.size() > 1 ? ts[1] : -1) : ts[0];
        if (other < 0 || !mem.count(other)) next[e.first] = e.second;
      }
    }
    if (next.empty()) throw Error(ErrorCode::degenerate, "build_hull: face with no boundary");
    std::vector<int> cycle;
    int start = next.begin()->first, cur = start;
    do {
      cycle.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end()) throw Error(ErrorCode::degenerate, "build_hull: open face boundary");
      cur = it->second;
    } while (cur != start && cycle.size() <= next.size());
    if (cur != start) throw Error(ErrorCode::degenerate, "build_hull: face boundary not a cycle");
    f.vertices = cycle;

    group_face[root] = static_cast<int>(P.faces.size());
    P.faces.push_back(std::move(f));
  }

  // Edges between merged faces, exterior angle from the sphere circles.
  std::map<std::pair<int, int>, std::pair<int, int>> face_pairs;  // vertex pair -> (left,right)
  for (int fi = 0; fi < static_cast<int>(P.faces.size()); ++fi) {
    const auto& cyc = P.faces[fi].vertices;
    const int m = static_cast<int>(cyc.size());
    for (int i = 0; i < m; ++i) {
      int a = cyc[i], b = cyc[(i + 1) % m];
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = face_pairs.find(key);
      if (it == face_pairs.end())
        face_pairs[key] = {fi, -1};
      else
        it->second.second = fi;
    }
  }
  for (auto& [vp, fp] : face_pairs) {
    if (fp.second < 0) throw Error(ErrorCode::degenerate, "build_hull: boundary edge with one face");
    HullEdge e;
    e.v0 = vp.first;
    e.v1 = vp.second;
    e.left = fp.first;
    e.right = fp.second;
    double t0 = sphere_circle_angle(P.faces[e.left].plane, P.faces[e.right].plane,
                                    {pts[e.v0].x, pts[e.v0].y, pts[e.v0].z});
    double t1 = sphere_circle_angle(P.faces[e.left].plane, P.faces[e.right].plane,
                                    {pts[e.v1].x, pts[e.v1].y, pts[e.v1].z});
    e.theta = 0.5 * (t0 + t1);
    P.edges.push_back(e);
  }

  return P;
}

GenCircle support_circle(const IdealPolyhedron& P, int face) {
  if (face < 0 || face >= static_cast<int>(P.faces.size()))
    throw Error(ErrorCode::invalid_input, "support_circle: bad face id");
  return P.faces[face].circle;
}

HullDiagnostics validate(const IdealPolyhedron& P) {
  HullDiagnostics d;
  const double pi = std::numbers::pi;
  const int V = static_cast<int>(P.vertices.size());
  double total = 0;
  d.vertex_angle_residuals.assign(V, 0.0);
  std::vector<double> sums(V, 0.0);
  for (const auto& e : P.edges) {
    sums[e.v0] += e.theta;
    sums[e.v1] += e.theta;
    total += e.theta;
  }
  for (int v = 0; v < V; ++v) d.vertex_angle_residuals[v] = std::abs(sums[v] - 2.0 * pi);
  d.total_angle_residual = std::abs(total - pi * V);
  int E = static_cast<int>(P.edges.size());
  int F = static_cast<int>(P.faces.size());
  d.euler_ok = (V - E + F == 2);
  d.theta_range_ok = true;
  for (const auto& e : P.edges)
    if (!(e.theta > 0.0 && e.theta <= pi + 1e-9)) d.theta_range_ok = false;
  d.max_support_residual = 0;
  for (const auto& f : P.faces) {
    for (int v : f.vertices) {
      SpherePoint s = to_sphere(P.vertices[v]);
      double r = std::abs(s.x * f.plane.u.x + s.y * f.plane.u.y + s.z * f.plane.u.z - f.plane.h);
      d.max_support_residual = std::max(d.max_support_residual, r);
    }
  }
  return d;
}

}  // namespace domeforge
