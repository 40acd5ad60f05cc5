#pragma once

#include "domeforge/confmetric.hpp"
#include "domeforge/npr.hpp"

#include <json.hpp>

namespace domeforge::io {

using json = nlohmann::json;

json point_to_json(const ExtPoint& p);
ExtPoint point_from_json(const json& j);

/// Reads {"points": [{"re":..,"im":..} | "inf", ...]}.
std::vector<ExtPoint> points_from_json(const json& j);

json circle_to_json(const GenCircle& c);
json hull_to_json(const IdealPolyhedron& P);
json retraction_to_json(const RetractionResult& r, double tau);
json geodesic_result_to_json(const GeodesicResult& g);
json bracket_to_json(const confmetric::DistanceBracket& b);
json constants_to_json();

}  // namespace domeforge::io
