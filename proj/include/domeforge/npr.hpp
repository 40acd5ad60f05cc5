#pragma once

#include "domeforge/dome.hpp"

#include <functional>
#include <string>
#include <vector>

namespace domeforge {

/// Finite point set X with its derived hull and developed dome.
struct FiniteDomain {
  std::vector<ExtPoint> points;
  IdealPolyhedron hull;
  DomeSurface dome;

  static FiniteDomain create(std::vector<ExtPoint> X, double tol = 1e-10);
};

struct RetractionResult {
  enum class Support { face_interior, edge };
  Support kind = Support::face_interior;
  int support_id = -1;  // face id or edge id
  DomePoint foot;       // chart coordinates (left face chart for edge feet)
  H3Point foot_ambient;
  double h = 0;  // maximal horoball radius at z
};

/// Nearest point retraction: the contact point of the smallest horoball at z
/// touching the dome, found as the global minimizer of the horoball functional
/// over faces (hemisphere tangency) and edges (1-d closed form).
RetractionResult retract(const FiniteDomain& D, const ExtPoint& z);

/// Thurston density tau(z) = 1 / h(z). Far points are handled by a chart
/// change z -> 1/(z - x0) and conformal naturality.
double thurston_density(const FiniteDomain& D, const ExtPoint& z);

struct FaceCell {
  int face = -1;
  GenCircle disk;
};

struct BigonCell {
  int edge = -1;
  double theta = 0;
  MobiusMap to_sector;  // f_e: bigon -> {0 < arg < theta}, edge -> (0, inf)
  int face_at_zero = -1;   // face whose cell borders the ray arg = 0
  int face_at_theta = -1;  // face bordering the ray arg = theta
};

struct CellDecomposition {
  std::vector<FaceCell> faces;
  std::vector<BigonCell> bigons;
};

CellDecomposition cell_decomposition(const FiniteDomain& D);

/// Poincare density of the face disk (equals tau inside the face cell).
double face_cell_density(const FiniteDomain& D, int face, const ExtPoint& z);
/// Pulled-back Euclidean strip density of a bigon (equals tau inside it).
double bigon_density(const CellDecomposition& C, int bigon, const ExtPoint& z);

/// Geometric membership tests (the retraction provides the authoritative
/// classification; these check the cell shapes directly).
bool in_face_cell(const FiniteDomain& D, int face, const ExtPoint& z);
bool in_bigon(const CellDecomposition& C, int bigon, const ExtPoint& z);

/// Planar pullback r^{-1}(alpha) of a transverse dome path.
struct PlanarArc {
  enum class Kind { face_segment, bigon_arc } kind = Kind::face_segment;
  // face segment: chart endpoints in the face chart; the planar curve is the
  // from_chart image of the chart geodesic.
  int face = -1;
  cplx a, b;
  // bigon arc: f_e^{-1}(s e^{it}), t running over [t0, t1] (t0 may exceed t1).
  int edge = -1;
  double s = 1, t0 = 0, t1 = 0;
};

struct PullbackResult {
  std::vector<PlanarArc> arcs;
  double l_tau_structural = 0;  // l_h(alpha) + i(alpha)
  double l_tau_quadrature = 0;  // adaptive Simpson of tau along the planar path
};

PullbackResult pullback_path(const FiniteDomain& D, const DomePath& path,
                             double quad_tol = 1e-8);

/// Adaptive Simpson quadrature of density(gamma(t)) * speed(t) over [t0, t1]
/// (used by the pullback check and the confmetric module).
double integrate_density(const std::function<double(cplx)>& density,
                         const std::function<cplx(double)>& gamma,
                         const std::function<double(double)>& speed, double t0, double t1,
                         double tol);

struct SvgViewport {
  double x = -2, y = -2, width = 4, height = 4;
  double scale = 160;  // pixels per unit
};

std::string svg_export(const FiniteDomain& D, const CellDecomposition& C,
                       const SvgViewport& vp = {});

}  // namespace domeforge
