#include "busemann/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace busemann {

namespace {

// Scenario files.  Points are [sheet, x1, x2], ideal points [sheet, phi]; numbers may be
// written as expressions such as "5pi/6+0.05".
const char* const kRegistry[] = {
    R"json({
  "name": "counterexample-4-5",
  "description": "Three-sheet 4-norm fan, labels as stated: xi=(2, 5pi/6), zeta=(0, pi/3), eta=(0, 5pi/6+0.05).",
  "space": {"kind": "fan", "sheets": [{"p": 4}, {"p": 4}, {"p": 4}]},
  "seed": 0,
  "steps": [
    {"id": "bound", "op": "epsilon_bound", "epsilon": 0.05},
    {"id": "xi_zeta", "op": "td_half_pi", "center": [2, "5pi/6"], "xi": [0, "pi/3"], "relation": "lt_half"},
    {"id": "zeta_eta", "op": "td_half_pi", "center": [0, "pi/3"], "xi": [0, "5pi/6+0.05"], "relation": "lt_half"},
    {"id": "xi_eta", "op": "td_pi", "xi": [2, "5pi/6"], "eta": [0, "5pi/6+0.05"], "relation": "gt_pi",
     "K": [10, 100, 1000], "samples": 64},
    {"id": "horoballs", "op": "intersection_bounded", "phi": [2, "5pi/6"], "psi": [0, "5pi/6+0.05"],
     "R": [1, 10, 100, 1000, 10000]}
  ],
  "expectations": [
    {"id": "epsilon-admissible", "step": "bound", "path": "/excess", "op": "gt", "value": 0,
     "source": "claim", "basis": "0 < epsilon < arctan(3^(3/4)) - pi/3"},
    {"id": "epsilon-bound-value", "step": "bound", "path": "/bound", "op": "eq", "value": 0.1101888292, "tol": 1e-9,
     "source": "oracle", "basis": "direct evaluation of arctan(3^(3/4)) - pi/3"},
    {"id": "xi-zeta-lt-half", "step": "xi_zeta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td([beta_xi], zeta) < pi/2"},
    {"id": "xi-zeta-slope", "step": "xi_zeta", "path": "/witnesses/slope/hi", "op": "lt", "value": -0.001,
     "source": "claim", "basis": "Td([beta_xi], zeta) < pi/2 with a clear margin"},
    {"id": "zeta-eta-lt-half", "step": "zeta_eta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td([beta_zeta], eta) < pi/2"},
    {"id": "zeta-eta-slope", "step": "zeta_eta", "path": "/witnesses/slope/hi", "op": "lt", "value": -0.001,
     "source": "claim", "basis": "Td([beta_zeta], eta) < pi/2 with a clear margin"},
    {"id": "xi-eta-gt-pi", "step": "xi_eta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td(xi, eta) > pi"},
    {"id": "horoballs-bounded", "step": "horoballs", "path": "/verdict", "op": "eq", "value": "bounded",
     "source": "claim", "basis": "Td(xi, eta) > pi gives compact horoball intersections"},
    {"id": "horoballs-margin", "step": "horoballs", "path": "/margin", "op": "gt", "value": 0,
     "source": "oracle", "basis": "positive minimum of max(beta_xi, beta_eta) on a sphere"}
  ]
})json",
    R"json({
  "name": "counterexample-4-5-relabelled",
  "description": "Same triple with xi moved to sheet 1, matching the orientation of the fixed gluing.",
  "space": {"kind": "fan", "sheets": [{"p": 4}, {"p": 4}, {"p": 4}]},
  "seed": 0,
  "steps": [
    {"id": "bound", "op": "epsilon_bound", "epsilon": 0.05},
    {"id": "xi_zeta", "op": "td_half_pi", "center": [1, "5pi/6"], "xi": [0, "pi/3"], "relation": "lt_half"},
    {"id": "zeta_eta", "op": "td_half_pi", "center": [0, "pi/3"], "xi": [0, "5pi/6+0.05"], "relation": "lt_half"},
    {"id": "xi_eta", "op": "td_pi", "xi": [1, "5pi/6"], "eta": [0, "5pi/6+0.05"], "relation": "gt_pi",
     "K": [10, 100, 1000], "samples": 64},
    {"id": "horoballs", "op": "intersection_bounded", "phi": [1, "5pi/6"], "psi": [0, "5pi/6+0.05"],
     "R": [1, 10, 100, 1000, 10000]},
    {"id": "chained", "op": "triangle", "mode": "chained", "a": [1, "5pi/6"], "b": [0, "pi/3"],
     "c": [0, "5pi/6+0.05"]}
  ],
  "expectations": [
    {"id": "epsilon-admissible", "step": "bound", "path": "/excess", "op": "gt", "value": 0,
     "source": "claim", "basis": "0 < epsilon < arctan(3^(3/4)) - pi/3"},
    {"id": "xi-zeta-lt-half", "step": "xi_zeta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td([beta_xi], zeta) < pi/2"},
    {"id": "xi-zeta-slope", "step": "xi_zeta", "path": "/witnesses/slope/hi", "op": "lt", "value": -0.001,
     "source": "claim", "basis": "Td([beta_xi], zeta) < pi/2 with a clear margin"},
    {"id": "zeta-eta-lt-half", "step": "zeta_eta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td([beta_zeta], eta) < pi/2"},
    {"id": "zeta-eta-slope", "step": "zeta_eta", "path": "/witnesses/slope/hi", "op": "lt", "value": -0.001,
     "source": "claim", "basis": "Td([beta_zeta], eta) < pi/2 with a clear margin"},
    {"id": "xi-eta-gt-pi", "step": "xi_eta", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "claim", "basis": "Td(xi, eta) > pi"},
    {"id": "horoballs-bounded", "step": "horoballs", "path": "/verdict", "op": "eq", "value": "bounded",
     "source": "claim", "basis": "Td(xi, eta) > pi gives compact horoball intersections"},
    {"id": "chained-violation", "step": "chained", "path": "/counter_instance", "op": "eq", "value": true,
     "source": "claim", "basis": "the chained variant of the triangle inequality fails on this triple"}
  ]
})json",
    R"json({
  "name": "parabola-remark",
  "description": "Semiparabola y = |x|^(2/alpha) in the Euclidean plane: path length beats the chord by more than b.",
  "space": {"kind": "full-plane", "sheets": [{"p": 2}]},
  "seed": 0,
  "steps": [
    {"id": "b1", "op": "parabola_gap", "alpha": 1.5, "b": 1},
    {"id": "b10", "op": "parabola_gap", "alpha": 1.5, "b": 10}
  ],
  "expectations": [
    {"id": "gap-exceeds-1", "step": "b1", "path": "/excess", "op": "gt", "value": 0,
     "source": "claim", "basis": "the semiparabola is not a (1, b)-quasigeodesic"},
    {"id": "gap-exceeds-10", "step": "b10", "path": "/excess", "op": "gt", "value": 0,
     "source": "claim", "basis": "the semiparabola is not a (1, b)-quasigeodesic"}
  ]
})json",
    R"json({
  "name": "sheet-boundary-semiplane",
  "description": "Boundary line of sheet 1 in the three-sheet 4-norm fan, ends (1, 0) and (1, pi).",
  "space": {"kind": "fan", "sheets": [{"p": 4}, {"p": 4}, {"p": 4}]},
  "seed": 0,
  "steps": [
    {"id": "eq_pi", "op": "td_pi", "xi": [1, 0], "eta": [1, "pi"], "relation": "eq_pi",
     "K": [10, 100, 1000], "samples": 64},
    {"id": "horoballs", "op": "intersection_bounded", "phi": [1, 0], "psi": [1, "pi"],
     "R": [1, 10, 100, 1000, 10000]},
    {"id": "semiplane", "op": "semiplane", "xi": [1, 0], "eta": [1, "pi"], "through": [0, 0, 0],
     "K": [1, 4, 16, 64], "side": "eta_to_xi"}
  ],
  "expectations": [
    {"id": "eq-pi", "step": "eq_pi", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "oracle", "basis": "same-sheet closed form: delta = gauge((2, 0))/2 = 1, neighbours below 1"},
    {"id": "horoballs-unbounded", "step": "horoballs", "path": "/verdict", "op": "eq",
     "value": "unbounded-at-resolution", "source": "oracle", "basis": "the ray (1, pi/2) lies in both horoballs"},
    {"id": "semiplane-found", "step": "semiplane", "path": "/found", "op": "eq", "value": true,
     "source": "oracle", "basis": "sheet 1 is a normed half-plane bounded by the line"},
    {"id": "semiplane-discrepancy", "step": "semiplane", "path": "/max_discrepancy", "op": "le", "value": 1e-6,
     "source": "oracle", "basis": "strip distances equal the 4-norm model"}
  ]
})json",
    R"json({
  "name": "euclidean-sanity",
  "description": "Closed forms in the Euclidean plane: distance, slope -cos(theta), delta sin(theta/2).",
  "space": {"kind": "full-plane", "sheets": [{"p": 2}]},
  "seed": 0,
  "steps": [
    {"id": "dist", "op": "distance", "from": [0, 0, 0], "to": [0, 3, 4]},
    {"id": "slope", "op": "td_half_pi", "center": [0, "pi/2"], "xi": [0, "pi/2+pi/3"], "relation": "lt_half"},
    {"id": "delta", "op": "delta", "xi": [0, 0], "eta": [0, "pi/2"], "o": [0, 0, 0]},
    {"id": "classify", "op": "horoball_classify", "center": [0, "pi/2"], "grid": 360}
  ],
  "expectations": [
    {"id": "distance", "step": "dist", "path": "/distance", "op": "eq", "value": 5, "tol": 1e-12,
     "source": "oracle", "basis": "Pythagoras"},
    {"id": "slope-value", "step": "slope", "path": "/witnesses/slope/hi", "op": "eq", "value": -0.5, "tol": 1e-9,
     "source": "oracle", "basis": "slope = -cos(pi/3)"},
    {"id": "slope-verdict", "step": "slope", "path": "/outcome", "op": "eq", "value": "holds",
     "source": "oracle", "basis": "angle pi/3 < pi/2"},
    {"id": "delta-value", "step": "delta", "path": "/bracket/lo", "op": "eq", "value": 0.707106781187, "tol": 1e-9,
     "source": "oracle", "basis": "sin(pi/4)"},
    {"id": "inside-count", "step": "classify", "path": "/counts/inside", "op": "eq", "value": 179,
     "source": "oracle", "basis": "directions strictly within pi/2 of the centre on a 1-degree grid"},
    {"id": "sphere-count", "step": "classify", "path": "/counts/sphere", "op": "eq", "value": 2,
     "source": "oracle", "basis": "the two directions at exactly pi/2"}
  ]
})json",
};

constexpr double pi = 3.14159265358979323846;

std::vector<double> number_list(const json& j, const char* key, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<double> out;
    for (const auto& v : j[key]) out.push_back(v.is_string() ? parse_scalar(v.get<std::string>()) : v.get<double>());
    return out;
}

double number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j[key];
    return v.is_string() ? parse_scalar(v.get<std::string>()) : v.get<double>();
}

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw GeometryError(ErrorKind::schema, std::string("step is missing '") + key + "'");
    return number(j, key, 0.0);
}

IdealPoint ideal(const json& j, const char* key) {
    if (!j.contains(key)) throw GeometryError(ErrorKind::schema, std::string("step is missing '") + key + "'");
    return ideal_from_json(j[key]);
}

SpacePoint point(const ModelSpace& space, const json& j, const char* key) {
    return j.contains(key) ? point_from_json(j[key]) : apex(space);
}

Resolution resolution(const json& step, const StepContext& ctx) {
    Resolution r;
    r.K_schedule = number_list(step, "K", r.K_schedule);
    r.samples = static_cast<int>(number(step, "samples", r.samples));
    if (ctx.horizon) r.horizon = *ctx.horizon;
    r.seed = ctx.seed;
    return r;
}

Relation relation(const json& step) {
    const std::string s = step.value("relation", "");
    const auto r = relation_from_string(s);
    if (!r) throw GeometryError(ErrorKind::schema, "unknown relation '" + s + "'");
    return *r;
}

Side side_from_string(const std::string& s) {
    if (s == "any") return Side::any;
    if (s == "eta_to_xi") return Side::eta_to_xi;
    if (s == "xi_to_eta") return Side::xi_to_eta;
    throw GeometryError(ErrorKind::schema, "unknown side '" + s + "'");
}

TriangleMode mode_from_string(const std::string& s) {
    for (TriangleMode m : {TriangleMode::horofunction_two_points, TriangleMode::two_horofunctions_one_point,
                           TriangleMode::chained}) {
        if (s == to_string(m)) return m;
    }
    throw GeometryError(ErrorKind::schema, "unknown triangle mode '" + s + "'");
}

bool compare(const json& actual, const std::string& op, const json& expected, double tol) {
    if (op == "eq") {
        if (actual.is_number() && expected.is_number())
            return std::fabs(actual.get<double>() - expected.get<double>()) <= tol;
        return actual == expected;
    }
    if (!actual.is_number() || !expected.is_number()) return false;
    const double a = actual.get<double>(), e = expected.get<double>();
    if (op == "lt") return a < e;
    if (op == "le") return a <= e + tol;
    if (op == "gt") return a > e;
    if (op == "ge") return a >= e - tol;
    return false;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    Scenario s;
    try {
        s.name = doc.at("name").get<std::string>();
        s.description = doc.value("description", "");
        s.space = doc.at("space");
        s.seed = doc.value("seed", std::uint64_t{0});
        s.steps = doc.at("steps");
        for (const auto& e : doc.at("expectations")) {
            Expectation x;
            x.id = e.at("id").get<std::string>();
            x.step = e.at("step").get<std::string>();
            x.path = e.at("path").get<std::string>();
            x.op = e.at("op").get<std::string>();
            x.value = e.at("value");
            if (e.contains("tol")) x.tol = e["tol"].get<double>();
            x.source = e.value("source", "");
            x.basis = e.value("basis", "");
            s.expectations.push_back(x);
        }
    } catch (const json::exception& e) {
        throw GeometryError(ErrorKind::schema, std::string("scenario: ") + e.what());
    }
    return s;
}

std::vector<std::string> scenario_names() {
    std::vector<std::string> out;
    for (const char* text : kRegistry) out.push_back(json::parse(text).at("name").get<std::string>());
    return out;
}

Scenario find_scenario(const std::string& name) {
    for (const char* text : kRegistry) {
        const json doc = json::parse(text);
        if (doc.at("name") == name) return scenario_from_json(doc);
    }
    throw GeometryError(ErrorKind::invalid_argument, "unknown scenario '" + name + "'");
}

std::vector<std::string> lint_scenario(const Scenario& s) {
    std::vector<std::string> problems;
    std::set<std::string> steps;
    for (const auto& st : s.steps) {
        const std::string id = st.value("id", "");
        if (id.empty()) problems.push_back("step without id");
        if (!steps.insert(id).second) problems.push_back("duplicate step id '" + id + "'");
        if (!st.contains("op")) problems.push_back("step '" + id + "' has no op");
    }
    if (s.expectations.empty()) problems.push_back("no expectations");
    for (const auto& e : s.expectations) {
        if (e.source != "claim" && e.source != "oracle")
            problems.push_back("expectation '" + e.id + "' must have source claim or oracle");
        if (e.basis.empty()) problems.push_back("expectation '" + e.id + "' has no basis");
        if (!steps.count(e.step)) problems.push_back("expectation '" + e.id + "' names unknown step '" + e.step + "'");
        if (e.op != "eq" && e.op != "lt" && e.op != "le" && e.op != "gt" && e.op != "ge")
            problems.push_back("expectation '" + e.id + "' has unknown op '" + e.op + "'");
        try {
            (void)json::json_pointer(e.path);
        } catch (const json::exception&) {
            problems.push_back("expectation '" + e.id + "' has a malformed path");
        }
    }
    return problems;
}

json run_step(const ModelSpace& space, const json& step, const StepContext& ctx) {
    const std::string op = step.value("op", "");
    const std::string id = step.value("id", "");
    if (op == "distance") {
        const SpacePoint p = point_from_json(step.at("from")), q = point_from_json(step.at("to"));
        const Route r = shortest_route(space, p, q);
        if (ctx.sink && !same_point(space, p, q)) ctx.sink->polylines.emplace_back(id, geodesic(space, p, q));
        return {{"distance", r.length}, {"route", to_json(r)}};
    }
    if (op == "delta") {
        return to_json(delta_infinity(space, ideal(step, "xi"), ideal(step, "eta"), point(space, step, "o")));
    }
    if (op == "td_pi") {
        return to_json(td_pi(space, ideal(step, "xi"), ideal(step, "eta"), relation(step), resolution(step, ctx)));
    }
    if (op == "td_half_pi") {
        const BusemannFunction f{ideal(step, "center"), 0.0};
        return to_json(td_half_pi(space, f, ideal(step, "xi"), relation(step), resolution(step, ctx)));
    }
    if (op == "intersection_bounded") {
        const BusemannFunction f{ideal(step, "phi"), 0.0}, g{ideal(step, "psi"), 0.0};
        const int grid = ctx.grid.value_or(static_cast<int>(number(step, "grid", 720)));
        return to_json(intersection_bounded(space, f, g, point(space, step, "o"),
                                            number_list(step, "R", {1, 10, 100, 1000}), grid));
    }
    if (op == "quasigeodesic") {
        return to_json(certify_quasigeodesic(space, ideal(step, "xi"), ideal(step, "eta"), point(space, step, "o"),
                                             number(step, "epsilon"), number(step, "horizon", 1000.0)));
    }
    if (op == "parabola_gap") return to_json(parabola_gap(number(step, "alpha"), number(step, "b")));
    if (op == "epsilon_bound") {
        const double eps = number(step, "epsilon");
        const double bound = std::atan(std::pow(3.0, 0.75)) - pi / 3.0;
        return {{"epsilon", eps}, {"bound", bound}, {"excess", bound - eps}};
    }
    if (op == "semiplane") {
        const LineCertificate line = is_line(space, point(space, step, "through"), ideal(step, "xi"),
                                             ideal(step, "eta"), number(step, "line_horizon", 1000.0), 1e-6);
        if (!line.granted) return {{"found", false}, {"line", to_json(line)}, {"obstruction", "not a line"}};
        SemiplaneConfig cfg;
        if (ctx.grid) cfg.grid = *ctx.grid;
        return to_json(detect_normed_semiplane(space, line, number_list(step, "K", {1, 4, 16, 64}),
                                               side_from_string(step.value("side", "any")), cfg));
    }
    if (op == "horoball_classify") {
        const int grid = ctx.grid.value_or(static_cast<int>(number(step, "grid", 720)));
        IdealHoroball h = horoball_at_infinity(space, {ideal(step, "center"), 0.0}, grid);
        json j = to_json(h);
        if (ctx.sink) ctx.sink->classifications.emplace_back(id, std::move(h));
        return j;
    }
    if (op == "closure_check") {
        const int grid = ctx.grid.value_or(static_cast<int>(number(step, "grid", 720)));
        return to_json(boundary_closure_check(space, {ideal(step, "center"), 0.0}, point(space, step, "y"), grid));
    }
    if (op == "triangle") {
        return to_json(triangle_check_pi_half(space, mode_from_string(step.value("mode", "")), ideal(step, "a"),
                                              ideal(step, "b"), ideal(step, "c"), resolution(step, ctx)));
    }
    throw GeometryError(ErrorKind::schema, "unknown op '" + op + "'");
}

RunResult run_scenario(const Scenario& s, const RunOverrides& overrides) {
    RunResult out;
    const auto problems = lint_scenario(s);
    if (!problems.empty()) throw GeometryError(ErrorKind::schema, "scenario '" + s.name + "': " + problems.front());
    const ModelSpace space = load_space(s.space);
    StepContext ctx;
    ctx.seed = overrides.seed.value_or(s.seed);
    ctx.horizon = overrides.horizon;
    ctx.grid = overrides.grid;
    ctx.sink = &out;

    json steps = json::array();
    json results = json::object();
    for (const auto& st : s.steps) {
        json entry = {{"id", st.at("id")}, {"op", st.at("op")}, {"params", st}};
        try {
            json r = rounded(run_step(space, st, ctx));
            entry["result"] = r;
            results[st.at("id").get<std::string>()] = r;
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        steps.push_back(entry);
    }

    const double default_tol = overrides.tol.value_or(1e-9);
    json exps = json::array();
    bool all = true;
    for (const auto& e : s.expectations) {
        json actual = nullptr;
        if (results.contains(e.step)) {
            const json::json_pointer ptr(e.path);
            if (results[e.step].contains(ptr)) actual = results[e.step][ptr];
        }
        const double tol = e.tol.value_or(default_tol);
        const bool pass = !actual.is_null() && compare(actual, e.op, e.value, tol);
        all = all && pass;
        exps.push_back({{"id", e.id},
                        {"step", e.step},
                        {"path", e.path},
                        {"op", e.op},
                        {"expected", e.value},
                        {"actual", actual},
                        {"tol", tol},
                        {"source", e.source},
                        {"basis", e.basis},
                        {"pass", pass}});
    }
    out.passed = all;
    json config = {{"seed", ctx.seed}, {"default_tol", default_tol}};
    config["horizon"] = overrides.horizon ? json(*overrides.horizon) : json(nullptr);
    config["grid"] = overrides.grid ? json(*overrides.grid) : json(nullptr);
    out.report = rounded(json{{"scenario", s.name},
                              {"description", s.description},
                              {"space", s.space},
                              {"config", config},
                              {"steps", steps},
                              {"expectations", exps},
                              {"passed", all}});
    return out;
}

std::optional<ReportFormat> report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "plot-points") return ReportFormat::plot_points;
    return std::nullopt;
}

std::string emit_report(const RunResult& r, ReportFormat format, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string name = r.report.value("scenario", "report");
    std::string path, body;
    switch (format) {
        case ReportFormat::json:
            path = (fs::path(out_dir) / (name + ".json")).string();
            body = dump_stable(r.report);
            break;
        case ReportFormat::csv: {
            path = (fs::path(out_dir) / (name + ".csv")).string();
            if (r.classifications.empty()) {
                body = "step,expectation,pass\n";
                for (const auto& e : r.report.at("expectations"))
                    body += e.at("step").get<std::string>() + "," + e.at("id").get<std::string>() + "," +
                            (e.at("pass").get<bool>() ? "true" : "false") + "\n";
            } else {
                for (const auto& [step, h] : r.classifications) {
                    body += "# step " + step + "\n" + classification_csv(h);
                }
            }
            break;
        }
        case ReportFormat::plot_points: {
            path = (fs::path(out_dir) / (name + ".points")).string();
            const ModelSpace space = load_space(r.report.at("space"));
            for (const auto& [step, p] : r.polylines) body += polyline_plot_points(step, p);
            for (const auto& [step, h] : r.classifications) body += boundary_plot_points(space, h);
            break;
        }
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw GeometryError(ErrorKind::invalid_argument, "cannot write " + path);
    f << body;
    if (!f) throw GeometryError(ErrorKind::invalid_argument, "cannot write " + path);
    return path;
}

}  // namespace busemann
