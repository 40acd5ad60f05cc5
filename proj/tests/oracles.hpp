#pragma once

#include "domeforge/npr.hpp"

#include <vector>

// Test-only oracles, independent of the unfolding search paths they check.
namespace oracle {

using namespace domeforge;

// Dijkstra mesh over the dome surface: per-face hyperbolic grids plus edge
// chains, with exact chart-distance weights between nearby nodes.
class SurfaceMesh {
 public:
  SurfaceMesh(const DomeSurface& S, const H3Point& center, double radius, double h);

  // Shortest mesh path between two dome points (attached to nearby nodes).
  double distance(const DomePoint& a, const DomePoint& b) const;

  // Shortest essential loop through x crossing at most max_crossings edges,
  // via layered copies of the mesh keyed to an ordered edge sequence.
  double loop_through(const DomePoint& x, int max_crossings) const;

 private:
  const DomeSurface* S_;
  double h_;
  struct Node {
    int face = -1;      // owning face for grid nodes; left face for edge nodes
    cplx chart;         // coords in `face` chart
    int edge = -1;      // hull edge id for edge-chain nodes
    int face2 = -1;     // second face for edge nodes
    cplx chart2;        // coords in the second face chart
  };
  std::vector<Node> nodes_;
  std::vector<std::vector<std::pair<int, double>>> adj_;

  std::vector<std::pair<int, double>> attach(const DomePoint& p) const;
  friend double mesh_side_gap(const DomeSurface& S, int face, int side_a, int side_b, double h);
};

// Distance between two side geodesics of one face polygon, through the face.
double mesh_side_gap(const DomeSurface& S, int face, int side_a, int side_b, double h);

// Grid + refinement minimization of the horoball functional over the dome.
double brute_retract_h(const FiniteDomain& D, const cplx& z);

}  // namespace oracle
