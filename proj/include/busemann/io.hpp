#pragma once

#include <string>

#include <json.hpp>

#include "busemann/horoball.hpp"

namespace busemann {

using json = nlohmann::json;

// {"kind": "full-plane" | "fan", "sheets": [{"p": 4, "A": [[1, 0], [0, 1]]}, ...]}
ModelSpace load_space(const json& doc);
ModelSpace load_space_file(const std::string& path);
json space_to_json(const ModelSpace& space);

// Scalars such as "0.3", "pi/3", "5pi/6+0.05", "-2.5e-3".
double parse_scalar(const std::string& text);
// "sheet,x1,x2" and "sheet,phi"
SpacePoint parse_point(const std::string& text);
IdealPoint parse_ideal(const std::string& text);

SpacePoint point_from_json(const json& j);
IdealPoint ideal_from_json(const json& j);

// Every number rounded to 12 significant digits; -0 becomes 0.
double round12(double x);
json rounded(const json& j);
std::string dump_stable(const json& j);  // rounded, sorted keys, two-space indent, trailing newline

json to_json(const SpacePoint& p);
json to_json(const IdealPoint& xi);
json to_json(const Bracket& b);
json to_json(const Route& r);
json to_json(const Polyline& p);
json to_json(const DeltaEstimate& d);
json to_json(const TitsVerdict& v);
json to_json(const QuasiCert& q);
json to_json(const ParabolaWitness& w);
json to_json(const LineCertificate& l);
json to_json(const SemiplaneModel& m);
json to_json(const IntersectionReport& r);
json to_json(const IdealHoroball& h);  // summary counts plus classified points
json to_json(const ClosureReport& r);
json to_json(const TriangleReport& r);

// CSV rows: sheet,phi,slope_lo,slope_hi,class
std::string classification_csv(const IdealHoroball& h);
// Inside/outside boundary directions as apex segments of length `reach`, one polyline per block.
std::string boundary_plot_points(const ModelSpace& space, const IdealHoroball& h, double reach = 10.0);
std::string polyline_plot_points(const std::string& label, const Polyline& p);

}  // namespace busemann
