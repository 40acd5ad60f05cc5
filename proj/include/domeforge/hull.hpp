#pragma once

#include "domeforge/geom.hpp"

#include <vector>

namespace domeforge {

struct HullFace {
  std::vector<int> vertices;  // cyclic, counterclockwise viewed from the empty side
  SphereCircle plane;         // outward: all other lifts satisfy v . u < h
  GenCircle circle;           // planar support circle, disk side = empty side
};

struct HullEdge {
  int v0 = -1, v1 = -1;
  int left = -1, right = -1;  // adjacent face ids
  double theta = 0;           // exterior dihedral angle in (0, pi]
};

/// Ideal polyhedron CH(X): combinatorics of the hull of the sphere lifts.
struct IdealPolyhedron {
  std::vector<ExtPoint> vertices;
  std::vector<HullFace> faces;
  std::vector<HullEdge> edges;
  bool doubled = false;

  const HullEdge* find_edge(int a, int b) const;
  std::vector<int> edges_at_vertex(int v) const;
  std::vector<int> face_edge_ids(int f) const;
};

struct HullDiagnostics {
  std::vector<double> vertex_angle_residuals;  // |sum theta_e - 2 pi| per vertex
  double total_angle_residual = 0;             // |sum theta_e - pi V|
  bool euler_ok = false;
  bool theta_range_ok = false;
  double max_support_residual = 0;  // worst |v.u - h| over face vertices
};

/// Build the ideal hull of at least three pairwise distinct points.
/// tol controls coplanar-face merging (relative, on unit-sphere lifts).
IdealPolyhedron build_hull(const std::vector<ExtPoint>& X, double tol = 1e-10);

GenCircle support_circle(const IdealPolyhedron& P, int face);

HullDiagnostics validate(const IdealPolyhedron& P);

}  // namespace domeforge
