#pragma once

#include "domeforge/geom.hpp"
#include "domeforge/h2.hpp"
#include "domeforge/hull.hpp"

#include <optional>
#include <vector>

namespace domeforge {

/// Point on the developed dome: a face id plus upper half-plane chart coordinates.
struct DomePoint {
  int face = 0;
  cplx z{0.5, 1.0};
};

struct PathCrossing {
  int edge = -1;
  int face_before = -1;   // face whose chart holds point_before
  cplx point_before;      // crossing point in that chart
  double angle = 0;       // crossing angle in (0, pi/2]
  double theta = 0;       // exterior dihedral angle of the edge
};

struct PathSegment {
  int face = -1;
  cplx a, b;
  double length = 0;
};

/// Transverse path on the dome: per-face geodesic segments and edge crossings.
struct DomePath {
  std::vector<PathSegment> segments;
  std::vector<PathCrossing> crossings;
  double l_h = 0;
};

/// The dome carved into per-face H^2 charts glued along edges.
struct DomeSurface {
  IdealPolyhedron hull;

  struct Chart {
    MobiusMap to_chart;    // planar Moebius, disk side of the support circle -> H^2
    MobiusMap from_chart;  // inverse
    std::vector<int> cycle;            // vertex ids, as in the hull face
    std::vector<ExtPoint> corner;      // chart position per cycle entry (real or inf)
    std::vector<int> side_edge;        // edge id of side (cycle[i], cycle[i+1])
    std::vector<double> side_sign;     // interior sign of side_value per side
  };
  std::vector<Chart> charts;

  struct EdgeCharts {
    ExtPoint l0, l1;  // chart endpoints (edge v0, v1) in the left face chart
    ExtPoint r0, r1;  // same in the right face chart
    h2::RealMobius lr, rl;  // gluing: left chart -> right chart and back
  };
  std::vector<EdgeCharts> edge_charts;

  int other_face(int edge, int face) const;
  /// Chart endpoints of an edge seen from one of its faces, ordered (v0, v1).
  void edge_in_chart(int edge, int face, ExtPoint& p0, ExtPoint& p1) const;
  /// Gluing taking coordinates of `from` chart to the adjacent chart across edge.
  h2::RealMobius gluing(int edge, int from_face) const;
  /// Chart position of a hull vertex in a face chart.
  ExtPoint corner_of(int face, int vertex) const;

  bool contains(const DomePoint& p, double tol = 1e-9) const;
  H3Point ambient(const DomePoint& p) const;
};

DomeSurface develop(const IdealPolyhedron& P);

/// Worst parabolicity defect over hull vertices: composing the gluings around
/// a vertex must give |trace| = 2 and fix the vertex image.
double max_holonomy_defect(const DomeSurface& S);

struct GeodesicResult {
  double distance = 0;
  DomePath path;
  bool certified = false;  // false means upper bound only (budget exhausted)
};

struct SearchBudget {
  int max_pops = 100000;
};

GeodesicResult geodesic_distance(const DomeSurface& S, const DomePoint& a,
                                 const DomePoint& b, SearchBudget budget = {});

/// Develop a geodesic from x with chart direction theta for the given length.
DomePath shoot_geodesic(const DomeSurface& S, const DomePoint& x, double theta, double length);

/// Sum of exterior dihedral angles over interior edge crossings.
double intersection_number(const DomePath& path);

struct ClosedGeodesic {
  double length = 0;
  double inumber = 0;
  int start_face = -1;          // face first entered across edge_cycle[0]
  std::vector<int> edge_cycle;  // edges in crossing order
  std::vector<double> angles;
};

struct CycleBudget {
  int max_expansions = 200000;
  int max_depth = 48;
};

/// Closed geodesics of length <= length_cap found by cycling edge sequences.
/// Complete only up to the budget.
std::vector<ClosedGeodesic> closed_geodesics(const DomeSurface& S, double length_cap,
                                             CycleBudget budget = {});

/// Geodesic representative of the free homotopy class tracing the given face
/// cycle (faces[i] and faces[i+1] adjacent); empty if the class is not
/// hyperbolic or the trace could not be validated.
std::optional<ClosedGeodesic> geodesic_in_class(const DomeSurface& S,
                                                const std::vector<int>& face_cycle);

/// Holonomy of the loop crossing edge_cycle[1..], then edge_cycle[0], having
/// first entered start_face across edge_cycle[0] (the ClosedGeodesic frame).
/// Maps the fresh copy of start_face's chart to the base copy.
h2::RealMobius cycle_holonomy(const DomeSurface& S, int start_face,
                              const std::vector<int>& edge_cycle);

struct InjectivityResult {
  double upper = 0;
  bool certified = false;
};

InjectivityResult injectivity_radius(const DomeSurface& S, const DomePoint& x,
                                     SearchBudget budget = {});

}  // namespace domeforge
