#include "domeforge/json_io.hpp"

#include "domeforge/formulas.hpp"

namespace domeforge::io {

json point_to_json(const ExtPoint& p) {
  if (p.is_inf()) return json("inf");
  return json{{"re", p.re()}, {"im", p.im()}};
}

ExtPoint point_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return ExtPoint::inf();
    throw Error(ErrorCode::invalid_input, "point: unknown string literal");
  }
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw Error(ErrorCode::invalid_input, "point: expected {re, im} or \"inf\"");
  return ExtPoint(j.at("re").get<double>(), j.at("im").get<double>());
}

std::vector<ExtPoint> points_from_json(const json& j) {
  if (!j.contains("points") || !j.at("points").is_array())
    throw Error(ErrorCode::invalid_input, "expected a \"points\" array");
  std::vector<ExtPoint> out;
  for (const auto& e : j.at("points")) out.push_back(point_from_json(e));
  return out;
}

json circle_to_json(const GenCircle& c) {
  if (c.kind == GenCircle::Kind::circle)
    return json{{"kind", "circle"},
                {"center", {{"re", c.center.real()}, {"im", c.center.imag()}}},
                {"radius", c.radius},
                {"disk_is_interior", c.disk_is_interior}};
  return json{{"kind", "line"},
              {"normal", {{"re", c.normal.real()}, {"im", c.normal.imag()}}},
              {"offset", c.offset},
              {"disk_is_positive", c.disk_is_positive}};
}

json hull_to_json(const IdealPolyhedron& P) {
  json jv = json::array();
  for (const auto& v : P.vertices) jv.push_back(point_to_json(v));
  json jf = json::array();
  for (const auto& f : P.faces)
    jf.push_back(json{{"vertices", f.vertices}, {"circle", circle_to_json(f.circle)}});
  json je = json::array();
  for (const auto& e : P.edges)
    je.push_back(json{{"v", {e.v0, e.v1}}, {"faces", {e.left, e.right}}, {"theta", e.theta}});
  return json{{"vertices", jv}, {"faces", jf}, {"edges", je}, {"doubled", P.doubled}};
}

json retraction_to_json(const RetractionResult& r, double tau) {
  return json{
      {"foot",
       {{"kind", r.kind == RetractionResult::Support::face_interior ? "face" : "edge"},
        {"id", r.support_id},
        {"chart", {{"re", r.foot.z.real()}, {"im", r.foot.z.imag()}, {"face", r.foot.face}}},
        {"ambient",
         {{"x", {{"re", r.foot_ambient.x.real()}, {"im", r.foot_ambient.x.imag()}}},
          {"t", r.foot_ambient.t}}}}},
      {"h", r.h},
      {"tau", tau}};
}

json geodesic_result_to_json(const GeodesicResult& g) {
  json cr = json::array();
  for (const auto& c : g.path.crossings)
    cr.push_back(json{{"edge", c.edge}, {"theta", c.theta}, {"angle", c.angle}});
  return json{{"distance", g.distance}, {"certified", g.certified}, {"crossings", cr}};
}

json bracket_to_json(const confmetric::DistanceBracket& b) {
  return json{{"lower", b.lower},
              {"upper", b.upper},
              {"refined_to", b.refined_to},
              {"converged", b.converged}};
}

json constants_to_json() {
  formulas::ConstantTable pc = formulas::constants();
  return json{{"K", pc.K},         {"K0", pc.K0}, {"Kprime", pc.Kp}, {"K0prime", pc.K0p},
              {"Phi", pc.Phi},     {"k", pc.k},   {"m", pc.m},       {"G_asinh1", pc.G_asinh1}};
}

}  // namespace domeforge::io
