#include "domeforge/confmetric.hpp"

#include "domeforge/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <map>
#include <numbers>
#include <queue>

namespace domeforge::confmetric {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kPi = std::numbers::pi;
}  // namespace

double qh_density(const std::vector<ExtPoint>& X, const cplx& z) {
  double delta = kInf;
  for (const auto& x : X) {
    if (x.is_inf()) continue;
    delta = std::min(delta, std::abs(z - x.z));
  }
  if (!std::isfinite(delta))
    throw Error(ErrorCode::invalid_input, "qh_density: X has no finite points");
  if (delta < 1e-13) throw Error(ErrorCode::invalid_input, "qh_density: z lies in X");
  return 1.0 / delta;
}

double beta(const std::vector<ExtPoint>& X, const cplx& z) {
  double delta = 1.0 / qh_density(X, z);
  double best = kInf;
  for (size_t i = 0; i < X.size(); ++i) {
    if (X[i].is_inf() || std::abs(z - X[i].z) > delta * (1.0 + 1e-12)) continue;
    // a = X[i] attains delta; b ranges over the rest, |z - inf| = inf.
    double inner = kInf;
    for (size_t j = 0; j < X.size(); ++j) {
      if (j == i || X[j].is_inf()) continue;
      inner = std::min(inner, std::abs(std::log(delta / std::abs(z - X[j].z))));
    }
    best = std::min(best, inner);
  }
  return best;
}

Envelope bp_envelope_from(double q, double beta_value) {
  double k = formulas::constants().k;
  Envelope e;
  if (!std::isfinite(beta_value)) return {0.0, 0.0};
  e.lower = q / (std::sqrt(2.0) * (k + beta_value));
  e.upper = std::min((2.0 * k + 0.5 * kPi) / (k + beta_value), 2.0) * q;
  return e;
}

Envelope bp_envelope(const std::vector<ExtPoint>& X, const cplx& z) {
  return bp_envelope_from(qh_density(X, z), beta(X, z));
}

double annulus_poincare_density(double s, const cplx& z) {
  double r = std::abs(z);
  if (!(r > 1.0) || !(r < std::exp(s)))
    throw Error(ErrorCode::out_of_domain, "annulus_poincare_density: point outside annulus");
  return (kPi / s) / (r * std::sin(kPi * std::log(r) / s));
}

double annulus_beta(double s, const cplx& z) {
  double t = std::log(std::abs(z));
  if (!(t > 0.0) || !(t < s))
    throw Error(ErrorCode::out_of_domain, "annulus_beta: point outside annulus");
  return std::min(t, s - t);
}

double annulus_qh_density(double s, const cplx& z) {
  double r = std::abs(z);
  double delta = std::min(r - 1.0, std::exp(s) - r);
  if (!(delta > 0.0))
    throw Error(ErrorCode::out_of_domain, "annulus_qh_density: point outside annulus");
  return 1.0 / delta;
}

double annulus_thurston_density(double s, const cplx& z) {
  double r = std::abs(z);
  double es = std::exp(s);
  if (!(r > 1.0) || !(r < es))
    throw Error(ErrorCode::out_of_domain, "annulus_thurston_density: point outside annulus");
  return (es - 1.0) / ((r - 1.0) * (es - r));
}

namespace {

// Horoball functional minimum over the geodesic with finite ideal endpoints.
double chord_h(const cplx& z, const cplx& p, const cplx& q) {
  cplx m = 0.5 * (p + q);
  double r = 0.5 * std::abs(q - p);
  cplx e = (q - p) / (2.0 * r);
  cplx w = z - m;
  double a = std::real(std::conj(e) * w);
  double A = std::norm(w) + r * r;
  double disc = A * A - 4.0 * a * a * r * r;
  return std::sqrt(std::max(0.0, disc)) / (2.0 * r);
}

}  // namespace

double annulus_thurston_density_by_search(double s, const cplx& z) {
  double r = std::abs(z);
  double es = std::exp(s);
  if (!(r > 1.0) || !(r < es))
    throw Error(ErrorCode::out_of_domain, "annulus_thurston_density_by_search: outside annulus");
  // Rotation invariance: place z on the positive real axis and minimize the
  // horoball functional over the ruling chords e^{i t1} -> e^{s + i t2}.
  cplx zr(r, 0.0);
  auto value = [&](double t1, double t2) {
    return chord_h(zr, std::exp(cplx(0, t1)), es * std::exp(cplx(0, t2)));
  };
  double bt1 = 0, bt2 = 0, bh = value(0, 0);
  const int N = 48;
  for (int i = -N; i <= N; ++i) {
    for (int j = -N; j <= N; ++j) {
      double t1 = kPi * i / N, t2 = kPi * j / N;
      double h = value(t1, t2);
      if (h < bh) { bh = h; bt1 = t1; bt2 = t2; }
    }
  }
  double step = kPi / N;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (auto [d1, d2] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step},
                          {step, step}, {-step, -step}, {step, -step}, {-step, step}}) {
      double h = value(bt1 + d1, bt2 + d2);
      if (h < bh) { bh = h; bt1 += d1; bt2 += d2; improved = true; }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-12) break;
  }
  return 1.0 / bh;
}

AnnulusClosedForms annulus_closed_forms(double s) {
  if (!(s > 0)) throw Error(ErrorCode::out_of_domain, "annulus_closed_forms: s must be positive");
  AnnulusClosedForms out;
  out.rho_core = 2.0 * kPi * kPi / s;
  out.dome_core = 2.0 * kPi / std::sinh(0.5 * s);
  out.tau_core = 2.0 * kPi + out.dome_core;
  double nu = kPi * kPi / s;
  out.t_s_valid = nu < std::asinh(1.0);
  out.t_s = out.t_s_valid ? std::acosh(1.0 / std::asinh(nu)) : 0.0;
  return out;
}

double path_length(const std::function<double(cplx)>& density,
                   const std::vector<cplx>& polyline, double tol) {
  if (polyline.size() < 2)
    throw Error(ErrorCode::invalid_input, "path_length: need at least two points");
  auto guarded = [&](cplx z) {
    double v = density(z);
    // The adaptive splitter descends to ~1e-9 of a singular point before the
    // depth cap; a genuine 1/dist blowup is visible well before 1e8.
    if (!std::isfinite(v) || v > 1e8)
      throw Error(ErrorCode::out_of_domain, "path_length: density singularity on path");
    return v;
  };
  double total = 0;
  for (size_t i = 0; i + 1 < polyline.size(); ++i) {
    cplx a = polyline[i], b = polyline[i + 1];
    double len = std::abs(b - a);
    if (len < 1e-300) continue;
    auto gamma = [&](double t) { return a + t * (b - a); };
    auto speed = [&, len](double) { return len; };
    total += integrate_density(guarded, gamma, speed, 0.0, 1.0, tol);
  }
  return total;
}

MmDemoResult mm_demo(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_input, "mm_demo: n must be at least 1");
  MmDemoResult out;
  double s = 4.0 * n;
  // Density of A_n = {e^{-2n} <= |z| <= e^{2n}} rescaled from the unit-inner-radius form.
  auto rho = [&](cplx z) {
    double r = std::abs(z);
    return (kPi / s) / (r * std::sin(kPi * (std::log(r) + 2.0 * n) / s));
  };
  out.d_rho_radial = path_length(rho, {cplx(std::exp(-double(n)), 0), cplx(std::exp(double(n)), 0)},
                                 1e-10);
  // delta(t) = min(t - e^{-2n}, e^{2n} - t) on [e^{-n}, e^{n}].
  double a = std::exp(-2.0 * n), b = std::exp(2.0 * n);
  double lo = std::exp(-double(n)), hi = std::exp(double(n));
  double cross = 0.5 * (a + b);
  auto seg_near_inner = [&](double u, double v) { return std::log((v - a) / (u - a)); };
  auto seg_near_outer = [&](double u, double v) { return std::log((b - u) / (b - v)); };
  if (cross >= hi)
    out.d_q_radial = seg_near_inner(lo, hi);
  else if (cross <= lo)
    out.d_q_radial = seg_near_outer(lo, hi);
  else
    out.d_q_radial = seg_near_inner(lo, cross) + seg_near_outer(cross, hi);
  return out;
}

namespace {

// tau-weighted planar graph: nodes on cell boundaries plus a hyperbolic grid
// in each face chart; all edge weights are exact Thurston lengths of
// realizable planar paths, so any graph path is a valid upper bound.
struct TauGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  int source = -1, target = -1;

  void add_edge(int u, int v, double w) {
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
  }

  double shortest() const {
    std::vector<double> dist(adj.size(), kInf);
    std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>,
                        std::greater<>> pq;
    dist[source] = 0;
    pq.push({0, source});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u] + 1e-15) continue;
      if (u == target) return d;
      for (auto [v, w] : adj[u]) {
        if (d + w < dist[v] - 1e-15) {
          dist[v] = d + w;
          pq.push({d + w, v});
        }
      }
    }
    return dist[target];
  }
};

struct FaceGridNode {
  cplx chart;
  int id;
};

struct BoxFilter {
  double x0, x1, y0, y1;
  bool contains(const cplx& z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
};

double graph_upper_bound(const FiniteDomain& D, const CellDecomposition& C, const cplx& z,
                         const cplx& w, double h, int max_nodes, bool& node_capped) {
  node_capped = false;
  const double umax = 4.0;

  double px0 = std::min(z.real(), w.real()), px1 = std::max(z.real(), w.real());
  double py0 = std::min(z.imag(), w.imag()), py1 = std::max(z.imag(), w.imag());
  double diag = std::hypot(px1 - px0, py1 - py0);
  double pad = diag + 1.0;
  BoxFilter box{px0 - pad, px1 + pad, py0 - pad, py1 + pad};

  TauGraph G;
  int next_id = 0;
  // Per face: rows keyed by integer row index, each a sorted list of nodes.
  std::vector<std::map<int, std::vector<FaceGridNode>>> face_rows(D.hull.faces.size());
  // Per bigon and ray side: u -> node id.
  std::vector<std::array<std::map<long long, int>, 2>> arc_nodes(C.bigons.size());
  std::vector<cplx> chart_of;  // chart coords for face nodes (by id; arcs handled separately)

  auto new_node = [&]() {
    ++next_id;
    G.adj.emplace_back();
    chart_of.emplace_back();
    return next_id - 1;
  };

  // Face grids.
  for (size_t f = 0; f < D.hull.faces.size(); ++f) {
    const DomeSurface::Chart& ch = D.dome.charts[f];
    const MobiusMap& back = ch.from_chart;
    const int m = static_cast<int>(ch.corner.size());
    int kmin = static_cast<int>(std::floor(-umax / h));
    int kmax = static_cast<int>(std::ceil(umax / h));
    for (int k = kmin; k <= kmax; ++k) {
      if (next_id > max_nodes) { node_capped = true; break; }
      double y = std::exp(k * h);
      // Row within the polygon: cut x by the side geodesics, test midpoints.
      std::vector<double> cuts{-1e9, 1e9};
      for (int i = 0; i < m; ++i) {
        const ExtPoint& p = ch.corner[i];
        const ExtPoint& q = ch.corner[(i + 1) % m];
        if (p.is_inf() || q.is_inf()) {
          double x = p.is_inf() ? q.re() : p.re();
          cuts.push_back(x);
        } else {
          double c = 0.5 * (p.re() + q.re());
          double r = 0.5 * std::abs(q.re() - p.re());
          if (y < r) {
            double dx = std::sqrt(r * r - y * y);
            cuts.push_back(c - dx);
            cuts.push_back(c + dx);
          }
        }
      }
      std::sort(cuts.begin(), cuts.end());
      for (size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
        double lo = cuts[ci], hi = cuts[ci + 1];
        if (hi - lo < 1e-12) continue;
        double mid = std::clamp(0.5 * (lo + hi), -1e8, 1e8);
        if (!D.dome.contains({static_cast<int>(f), cplx(mid, y)}, 1e-12)) continue;
        double step = h * y;
        double start = std::ceil(std::max(lo + 0.25 * step, -40.0 * y) / step) * step;
        double stop = std::min(hi - 0.25 * step, 40.0 * y);
        for (double x = start; x <= stop; x += step) {
          ExtPoint planar = back(ExtPoint(cplx(x, y)));
          if (planar.is_inf() || !box.contains(planar.z)) continue;
          if (next_id > max_nodes) { node_capped = true; break; }
          int id = new_node();
          chart_of[id] = cplx(x, y);
          face_rows[f][k].push_back({cplx(x, y), id});
        }
      }
    }
    for (auto& [k, row] : face_rows[f])
      std::sort(row.begin(), row.end(),
                [](const FaceGridNode& a, const FaceGridNode& b) {
                  return a.chart.real() < b.chart.real();
                });
  }

  // Face-internal edges: chart distance between nearby grid nodes (chart
  // geodesics between points of a convex polygon stay inside it).
  auto connect_to_face = [&](int f, const cplx& p, int id, double radius) {
    int k0 = static_cast<int>(std::floor(std::log(p.imag()) / h));
    int span = static_cast<int>(std::ceil(radius / h)) + 1;
    for (int k = k0 - span; k <= k0 + span; ++k) {
      auto it = face_rows[f].find(k);
      if (it == face_rows[f].end()) continue;
      for (const auto& n : it->second) {
        if (n.id == id) continue;
        double d = h2::dist(p, n.chart);
        if (d <= radius) G.add_edge(id, n.id, d);
      }
    }
  };
  for (size_t f = 0; f < D.hull.faces.size(); ++f)
    for (auto& [k, row] : face_rows[f])
      for (const auto& n : row) connect_to_face(static_cast<int>(f), n.chart, n.id, 2.6 * h);

  // Bigon boundary arcs and crossings (exact strip geometry: tau-arclength
  // along a ray is du, across the bigon it is hypot(du, theta)).
  for (size_t bi = 0; bi < C.bigons.size(); ++bi) {
    const BigonCell& b = C.bigons[bi];
    MobiusMap inv = b.to_sector.inverse();
    int faces_at[2] = {b.face_at_zero, b.face_at_theta};
    double ts[2] = {0.0, b.theta};
    int klim = static_cast<int>(std::floor(umax / h));
    for (int side = 0; side < 2; ++side) {
      int prev = -1;
      for (int k = -klim; k <= klim; ++k) {
        double u = k * h;
        ExtPoint planar = inv(ExtPoint(std::exp(u) * std::exp(cplx(0, ts[side]))));
        if (planar.is_inf() || !box.contains(planar.z)) { prev = -1; continue; }
        if (next_id > max_nodes) { node_capped = true; break; }
        int id = new_node();
        arc_nodes[bi][side][k] = id;
        if (prev >= 0) G.add_edge(prev, id, h);
        prev = id;
        // Tie the arc node into the adjacent face grid: the boundary ray is a
        // side geodesic of that face's polygon, so chart segments stay inside.
        int f = faces_at[side];
        ExtPoint cb = D.dome.charts[f].to_chart(planar);
        if (!cb.is_inf() && cb.im() > 0) {
          chart_of[id] = cb.z;
          connect_to_face(f, cb.z, id, 2.6 * h);
        }
      }
    }
    // Crossing edges.
    for (auto& [k, id0] : arc_nodes[bi][0]) {
      for (int k2 = k - 2; k2 <= k + 2; ++k2) {
        auto it = arc_nodes[bi][1].find(k2);
        if (it == arc_nodes[bi][1].end()) continue;
        G.add_edge(id0, it->second, std::hypot((k2 - k) * h, b.theta));
      }
    }
  }

  // Terminals.
  auto attach = [&](const cplx& pt) {
    int id = new_node();
    RetractionResult r = retract(D, ExtPoint(pt));
    if (r.kind == RetractionResult::Support::face_interior) {
      ExtPoint cb = D.dome.charts[r.support_id].to_chart(ExtPoint(pt));
      if (cb.is_inf() || cb.im() <= 0)
        throw Error(ErrorCode::degenerate, "tau bracket: terminal chart failure");
      chart_of[id] = cb.z;
      connect_to_face(r.support_id, cb.z, id, 4.0 * h);
    } else {
      const BigonCell& b = C.bigons[r.support_id];
      ExtPoint wsec = b.to_sector(ExtPoint(pt));
      if (wsec.is_inf()) throw Error(ErrorCode::degenerate, "tau bracket: terminal at infinity");
      double u = std::log(std::abs(wsec.z));
      double t = std::arg(wsec.z);
      int kc = static_cast<int>(std::llround(u / h));
      for (int side = 0; side < 2; ++side) {
        double tdist = side == 0 ? t : b.theta - t;
        for (int k = kc - 6; k <= kc + 6; ++k) {
          auto it = arc_nodes[r.support_id][side].find(k);
          if (it == arc_nodes[r.support_id][side].end()) continue;
          G.add_edge(id, it->second, std::hypot(k * h - u, tdist));
        }
      }
    }
    return id;
  };
  G.source = attach(z);
  G.target = attach(w);

  return G.shortest();
}

}  // namespace

DistanceBracket tau_distance_bracket(const FiniteDomain& D, const cplx& z, const cplx& w,
                                     const BracketSchedule& schedule) {
  DistanceBracket out;
  if (std::abs(z - w) < 1e-15) {
    out.converged = true;
    return out;
  }
  RetractionResult rz = retract(D, ExtPoint(z));
  RetractionResult rw = retract(D, ExtPoint(w));
  GeodesicResult ge = geodesic_distance(D.dome, rz.foot, rw.foot);
  out.lower = ge.certified ? ge.distance
                           : h3_distance(rz.foot_ambient, rw.foot_ambient);

  // Same-face-cell pairs whose chart geodesic stays in the cell: exact tau
  // path through the isometric face.
  if (rz.kind == RetractionResult::Support::face_interior &&
      rw.kind == RetractionResult::Support::face_interior && rz.support_id == rw.support_id) {
    const MobiusMap& m = D.dome.charts[rz.support_id].to_chart;
    ExtPoint cz = m(ExtPoint(z)), cw = m(ExtPoint(w));
    if (!cz.is_inf() && !cw.is_inf() && cz.im() > 0 && cw.im() > 0) {
      out.upper = h2::dist(cz.z, cw.z);
      out.refined_to = 0;
      double gap = (out.upper - out.lower) / std::max(out.upper, 1e-300);
      out.converged = gap <= schedule.target_gap + 1e-12;
      if (out.converged) return out;
    }
  }

  CellDecomposition C = cell_decomposition(D);
  if (out.upper == 0) out.upper = kInf;
  for (double h : schedule.spacings) {
    bool capped = false;
    double ub = graph_upper_bound(D, C, z, w, h, schedule.max_nodes, capped);
    if (std::isfinite(ub) && ub < out.upper) out.upper = ub;
    out.refined_to = h;
    double gap = (out.upper - out.lower) / std::max(out.upper, 1e-300);
    if (gap <= schedule.target_gap) {
      out.converged = true;
      break;
    }
    if (capped) break;
  }
  if (!std::isfinite(out.upper))
    throw Error(ErrorCode::budget_exhausted, "tau_distance_bracket: no upper bound found");
  return out;
}

}  // namespace domeforge::confmetric
