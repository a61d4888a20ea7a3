#include "busemann/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace busemann {

namespace {

constexpr double pi = 3.14159265358979323846;

GeometryError schema(const std::string& what) { return GeometryError(ErrorKind::schema, what); }

Mat2 matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2) {
        throw schema("A must be a 2x2 array");
    }
    for (const auto& row : j)
        for (const auto& v : row)
            if (!v.is_number()) throw schema("A entries must be numbers");
    return Mat2{j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>()};
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", round12(x));
    return buf;
}

}  // namespace

ModelSpace load_space(const json& doc) {
    if (!doc.is_object()) throw schema("space description must be an object");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw schema("missing string field 'kind'");
    if (!doc.contains("sheets") || !doc["sheets"].is_array()) throw schema("missing array field 'sheets'");
    const std::string kind = doc["kind"];
    std::vector<NormGauge> gauges;
    for (const auto& s : doc["sheets"]) {
        if (!s.is_object() || !s.contains("p") || !s["p"].is_number()) throw schema("each sheet needs a numeric 'p'");
        const Mat2 A = s.contains("A") ? matrix_from_json(s["A"]) : Mat2::identity();
        gauges.emplace_back(s["p"].get<double>(), A);
    }
    if (kind == "full-plane") {
        if (gauges.size() != 1) throw GeometryError(ErrorKind::invalid_space, "full-plane takes exactly one sheet");
        return ModelSpace::full_plane(gauges[0]);
    }
    if (kind == "fan") return ModelSpace::fan(gauges);
    throw schema("kind must be 'full-plane' or 'fan'");
}

ModelSpace load_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError(ErrorKind::schema, "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw schema(std::string("malformed JSON: ") + e.what());
    }
    return load_space(doc);
}

json space_to_json(const ModelSpace& space) {
    json sheets = json::array();
    for (const auto& g : space.sheets()) {
        const Mat2& A = g.A();
        sheets.push_back({{"p", g.p()}, {"A", {{A.a, A.b}, {A.c, A.d}}}});
    }
    return {{"kind", space.is_fan() ? "fan" : "full-plane"}, {"sheets", sheets}};
}

double parse_scalar(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.empty()) throw GeometryError(ErrorKind::invalid_argument, "empty number");
    auto bad = [&] { return GeometryError(ErrorKind::invalid_argument, "cannot parse number '" + text + "'"); };
    size_t i = 0;
    double total = 0.0;
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            if (s[i] == '-') sign = -1.0;
            ++i;
        }
        double coef = 1.0;
        bool have = false;
        const char* b = s.c_str() + i;
        char* e = nullptr;
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
            coef = std::strtod(b, &e);
            i += static_cast<size_t>(e - b);
            have = true;
        }
        if (s.compare(i, 2, "pi") == 0) {
            coef *= pi;
            i += 2;
            have = true;
        }
        if (!have) throw bad();
        if (i < s.size() && s[i] == '/') {
            ++i;
            const char* db = s.c_str() + i;
            if (i >= s.size() || !(std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) throw bad();
            const double den = std::strtod(db, &e);
            i += static_cast<size_t>(e - db);
            coef /= den;
        }
        if (i < s.size() && s[i] != '+' && s[i] != '-') throw bad();
        total += sign * coef;
    }
    if (!std::isfinite(total)) throw bad();
    return total;
}

namespace {

int sheet_index(double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e6) {
        throw GeometryError(ErrorKind::invalid_argument, "sheet index must be a nonnegative integer");
    }
    return static_cast<int>(v);
}

}  // namespace

SpacePoint parse_point(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 3) throw GeometryError(ErrorKind::invalid_argument, "point must be 'sheet,x1,x2'");
    return SpacePoint{sheet_index(parse_scalar(parts[0])), parse_scalar(parts[1]), parse_scalar(parts[2])};
}

IdealPoint parse_ideal(const std::string& text) {
    const auto parts = split_commas(text);
    if (parts.size() != 2) throw GeometryError(ErrorKind::invalid_argument, "ideal point must be 'sheet,phi'");
    return IdealPoint{sheet_index(parse_scalar(parts[0])), parse_scalar(parts[1])};
}

namespace {

double scalar_field(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_scalar(j.get<std::string>());
    throw schema("expected a number or numeric expression");
}

}  // namespace

SpacePoint point_from_json(const json& j) {
    if (j.is_string()) return parse_point(j.get<std::string>());
    if (j.is_array() && j.size() == 3)
        return SpacePoint{sheet_index(scalar_field(j[0])), scalar_field(j[1]), scalar_field(j[2])};
    if (j.is_object() && j.contains("sheet") && j.contains("x1") && j.contains("x2"))
        return SpacePoint{sheet_index(scalar_field(j["sheet"])), scalar_field(j["x1"]), scalar_field(j["x2"])};
    throw schema("point must be [sheet, x1, x2] or {sheet, x1, x2}");
}

IdealPoint ideal_from_json(const json& j) {
    if (j.is_string()) return parse_ideal(j.get<std::string>());
    if (j.is_array() && j.size() == 2) return IdealPoint{sheet_index(scalar_field(j[0])), scalar_field(j[1])};
    if (j.is_object() && j.contains("sheet") && j.contains("phi"))
        return IdealPoint{sheet_index(scalar_field(j["sheet"])), scalar_field(j["phi"])};
    throw schema("ideal point must be [sheet, phi] or {sheet, phi}");
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

json rounded(const json& j) {
    if (j.is_number_float()) return round12(j.get<double>());
    if (j.is_array()) {
        json out = json::array();
        for (const auto& v : j) out.push_back(rounded(v));
        return out;
    }
    if (j.is_object()) {
        json out = json::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
        return out;
    }
    return j;
}

std::string dump_stable(const json& j) { return rounded(j).dump(2) + "\n"; }

json to_json(const SpacePoint& p) { return {{"sheet", p.sheet}, {"x1", p.x1}, {"x2", p.x2}}; }
json to_json(const IdealPoint& xi) { return {{"sheet", xi.sheet}, {"phi", xi.phi}}; }

json to_json(const Bracket& b) {
    return {{"lo", b.lo}, {"hi", b.hi}, {"horizon", b.horizon}, {"converged", b.converged}};
}

json to_json(const Route& r) {
    static const char* kinds[] = {"direct", "seam", "apex"};
    json j = {{"kind", kinds[static_cast<int>(r.kind)]}, {"length", r.length}};
    if (r.kind == RouteKind::seam) {
        j["seam"] = r.seam;
        j["s"] = r.s;
    }
    return j;
}

json to_json(const Polyline& p) {
    json legs = json::array();
    for (const auto& l : p.legs) {
        legs.push_back({{"sheet", l.sheet},
                        {"start", {l.start.x, l.start.y}},
                        {"end", {l.end.x, l.end.y}},
                        {"length", l.length}});
    }
    return {{"legs", legs}, {"length", p.total_length}};
}

json to_json(const DeltaEstimate& d) {
    json j = {{"xi", to_json(d.xi)},
              {"eta", to_json(d.eta)},
              {"basepoint", to_json(d.basepoint)},
              {"bracket", to_json(d.bracket)},
              {"certificate", to_string(d.certificate)},
              {"monotone", d.monotone}};
    if (d.certificate != DeltaCertificate::none) j["exact_value"] = d.exact_value;
    return j;
}

json to_json(const TitsVerdict& v) {
    json witnesses = json::object();
    if (v.delta) witnesses["delta"] = to_json(*v.delta);
    if (v.slope) witnesses["slope"] = to_json(*v.slope);
    if (!v.probes.empty()) {
        json probes = json::array();
        for (const auto& p : v.probes) {
            json q = {{"K", p.K},
                      {"pairs_checked", p.pairs_checked},
                      {"certified_pairs", p.certified_pairs},
                      {"witness_found", p.witness_found},
                      {"obstruction", p.obstruction}};
            if (p.witness_found) {
                q["witness_xi"] = to_json(p.witness_xi);
                q["witness_eta"] = to_json(p.witness_eta);
                q["witness_delta"] = p.witness_delta;
            }
            probes.push_back(q);
        }
        witnesses["neighborhoods"] = probes;
    }
    return {{"relation", to_string(v.relation)},
            {"outcome", to_string(v.outcome)},
            {"margin", v.margin},
            {"certificate", to_string(v.certificate)},
            {"resolution", {{"K_max", v.K_max}, {"samples", v.samples}, {"horizon", v.horizon}}},
            {"witnesses", witnesses}};
}

json to_json(const QuasiCert& q) {
    json j = {{"epsilon", q.epsilon},
              {"status", to_string(q.status)},
              {"delta", to_json(q.delta)},
              {"max_upper_excess", q.max_upper_excess},
              {"pairs", q.pairs}};
    j["b"] = q.b ? json(*q.b) : json(nullptr);
    if (q.falsification) {
        j["falsification"] = {{"s", q.falsification->s}, {"t", q.falsification->t},
                              {"measured", q.falsification->measured}};
    }
    return j;
}

json to_json(const ParabolaWitness& w) {
    return {{"alpha", w.alpha}, {"b", w.b},           {"x0", w.x0},       {"y0", w.y0},
            {"chord", w.chord}, {"path_length", w.path_length}, {"gap", w.gap()}, {"excess", w.gap() - w.b}};
}

json to_json(const LineCertificate& l) {
    return {{"through_point", to_json(l.through_point)},
            {"end_plus", to_json(l.end_plus)},
            {"end_minus", to_json(l.end_minus)},
            {"residual", l.residual},
            {"horizon", l.horizon_T},
            {"granted", l.granted}};
}

json to_json(const SemiplaneModel& m) {
    json strips = json::array();
    for (const auto& s : m.strips) {
        strips.push_back({{"K", s.K},
                          {"b_point", to_json(s.b_point)},
                          {"distance_to_boundary", s.distance_to_boundary},
                          {"parallel_residual", s.parallel.residual},
                          {"discrepancy", s.strip.max_discrepancy},
                          {"parallel_spread", s.strip.parallel_spread},
                          {"width", s.strip.width},
                          {"pairs", s.strip.pairs},
                          {"nest_error", s.nest_error}});
    }
    json j = {{"found", m.found},
              {"side", to_string(m.side)},
              {"boundary", to_json(m.boundary)},
              {"strips", strips},
              {"max_discrepancy", m.max_discrepancy}};
    if (!m.strips.empty()) j["transversal"] = to_json(m.transversal);
    if (!m.found) {
        j["obstruction"] = m.obstruction;
        j["obstruction_K"] = m.obstruction_K;
    }
    return j;
}

json to_json(const IntersectionReport& r) {
    json w = json::array();
    for (const auto& s : r.witnesses) {
        w.push_back({{"R", s.R}, {"theta", s.theta}, {"point", to_json(s.point)}, {"min_max_value", s.value}});
    }
    return {{"verdict", to_string(r.verdict)}, {"margin", r.margin}, {"R_decided", r.R_decided}, {"witnesses", w}};
}

json to_json(const IdealHoroball& h) {
    int counts[4] = {0, 0, 0, 0};
    json pts = json::array();
    for (const auto& c : h.points) {
        ++counts[static_cast<int>(c.cls)];
        pts.push_back({{"xi", to_json(c.xi)}, {"slope_lo", c.slope.lo}, {"slope_hi", c.slope.hi},
                       {"class", to_string(c.cls)}});
    }
    return {{"center", to_json(h.center.center)},
            {"per_sheet", h.per_sheet},
            {"counts",
             {{"inside", counts[0]}, {"sphere", counts[1]}, {"outside", counts[2]}, {"undetermined", counts[3]}}},
            {"points", pts}};
}

json to_json(const ClosureReport& r) {
    json bad = json::array();
    for (const auto& e : r.entries) {
        if (!e.hard_discrepancy) continue;
        bad.push_back({{"xi", to_json(e.xi)}, {"class", to_string(e.cls)}, {"ray_stays", e.ray_stays},
                       {"max_gap", e.max_gap}});
    }
    return {{"agreements", r.agreements},
            {"band_points", r.band_points},
            {"hard_discrepancies", r.hard_discrepancies},
            {"discrepancies", bad}};
}

json to_json(const TriangleReport& r) {
    return {{"mode", to_string(r.mode)},
            {"hypothesis_1", to_json(r.hypothesis_1)},
            {"hypothesis_2", to_json(r.hypothesis_2)},
            {"conclusion", to_json(r.conclusion)},
            {"hypotheses_hold", r.hypotheses_hold},
            {"counter_instance", r.counter_instance}};
}

std::string classification_csv(const IdealHoroball& h) {
    std::string out = "sheet,phi,slope_lo,slope_hi,class\n";
    for (const auto& c : h.points) {
        out += std::to_string(c.xi.sheet) + "," + fmt12(c.xi.phi) + "," + fmt12(c.slope.lo) + "," +
               fmt12(c.slope.hi) + "," + to_string(c.cls) + "\n";
    }
    return out;
}

std::string boundary_plot_points(const ModelSpace& space, const IdealHoroball& h, double reach) {
    std::string out;
    const size_t n = h.points.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = h.points[i];
        const auto& b = h.points[(i + 1) % n];
        const bool a_in = a.cls == IdealClass::inside, b_in = b.cls == IdealClass::inside;
        if (a_in == b_in || (!space.is_fan() && n == 1)) continue;
        // the transition lies between two grid directions; draw both apex rays
        out += "# boundary between " + fmt12(cone_angle(space, a.xi)) + " and " + fmt12(cone_angle(space, b.xi)) +
               "\n";
        for (const auto* c : {&a, &b}) {
            const SpacePoint p = point_on_apex_ray(space, c->xi, reach);
            out += std::to_string(p.sheet) + " 0 0\n";
            out += std::to_string(p.sheet) + " " + fmt12(p.x1) + " " + fmt12(p.x2) + "\n";
        }
        out += "\n";
    }
    return out;
}

std::string polyline_plot_points(const std::string& label, const Polyline& p) {
    std::string out = "# " + label + "\n";
    for (const auto& l : p.legs) {
        out += std::to_string(l.sheet) + " " + fmt12(l.start.x) + " " + fmt12(l.start.y) + "\n";
        out += std::to_string(l.sheet) + " " + fmt12(l.end.x) + " " + fmt12(l.end.y) + "\n";
    }
    return out + "\n";
}

}  // namespace busemann
