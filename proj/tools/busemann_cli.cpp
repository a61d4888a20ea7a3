#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "busemann/scenario.hpp"

using namespace busemann;

namespace {

struct Globals {
    std::string space = "euclidean";
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::optional<double> horizon;
    std::optional<int> grid;
    std::string format = "json";
    std::string out;
};

ModelSpace builtin_or_file(const std::string& s) {
    if (std::filesystem::exists(s)) return load_space_file(s);
    auto same = [](double p) { return std::vector<NormGauge>(3, NormGauge(p)); };
    if (s == "euclidean") return ModelSpace::full_plane(NormGauge(2.0));
    if (s == "p4-plane") return ModelSpace::full_plane(NormGauge(4.0));
    if (s == "p4-fan3") return ModelSpace::fan(same(4.0));
    if (s == "euclidean-fan3") return ModelSpace::fan(same(2.0));
    throw GeometryError(ErrorKind::schema,
                        "no such file or built-in space '" + s + "' (euclidean, p4-plane, p4-fan3, euclidean-fan3)");
}

std::vector<double> numbers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_scalar(item));
    return out;
}

void write_text(const Globals& g, const std::string& name, const std::string& ext, const std::string& body) {
    if (g.out.empty()) {
        std::cout << body;
        return;
    }
    std::filesystem::create_directories(g.out);
    const auto path = std::filesystem::path(g.out) / (name + "." + ext);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw GeometryError(ErrorKind::invalid_argument, "cannot write " + path.string());
    f << body;
    std::cerr << "wrote " << path.string() << "\n";
}

void emit(const Globals& g, const std::string& name, const json& j) { write_text(g, name, "json", dump_stable(j)); }

CLI::App* verb(CLI::App& parent, const std::string& name, const std::string& help) {
    CLI::App* s = parent.add_subcommand(name, help);
    s->fallthrough();
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Busemann-space geometry: distances, rays, ideal-boundary relations, horoballs, scenarios"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--space", g.space, "space file (JSON) or built-in name");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--tol", g.tol, "default tolerance");
    app.add_option("--horizon", g.horizon, "ray horizon");
    app.add_option("--grid", g.grid, "grid size per sheet");
    app.add_option("--format", g.format, "json | csv | plot-points")->check(CLI::IsMember({"json", "csv", "plot-points"}));
    app.add_option("--out", g.out, "output directory");

    std::string from, to, pt, xi, eta, center, rel, Ks = "10,100,1000", side = "any", scenario_name;
    int samples = 64;
    double epsilon = 0.05;

    auto* space_cmd = verb(app, "space", "space description tools");
    auto* space_validate = verb(*space_cmd, "validate", "check a space description");

    auto* dist = verb(app, "dist", "distance and route between two points");
    dist->add_option("--from", from, "sheet,x1,x2")->required();
    dist->add_option("--to", to, "sheet,x1,x2")->required();

    auto* geo = verb(app, "geodesic", "geodesic polyline between two points");
    geo->add_option("--from", from, "sheet,x1,x2")->required();
    geo->add_option("--to", to, "sheet,x1,x2")->required();

    auto* ray_cmd = verb(app, "ray", "ray from a point to an ideal point, truncated at --horizon (default 10)");
    ray_cmd->add_option("--point", pt, "sheet,x1,x2")->required();
    ray_cmd->add_option("--xi", xi, "sheet,phi")->required();

    auto* bus = verb(app, "busemann", "Busemann function value, normalized to 0 at the apex");
    bus->add_option("--center", center, "sheet,phi")->required();
    bus->add_option("--point", pt, "sheet,x1,x2")->required();

    auto* delta_cmd = verb(app, "delta", "delta bracket of two ideal points");
    delta_cmd->add_option("--xi", xi, "sheet,phi")->required();
    delta_cmd->add_option("--eta", eta, "sheet,phi")->required();
    delta_cmd->add_option("--point", pt, "basepoint sheet,x1,x2 (default apex)");

    auto* tits = verb(app, "tits", "relations at pi and pi/2");
    tits->require_subcommand(1);
    auto* tits_pi = verb(*tits, "pi", "lt_pi | le_pi | ge_pi | gt_pi | eq_pi between xi and eta");
    tits_pi->add_option("--xi", xi, "sheet,phi")->required();
    tits_pi->add_option("--eta", eta, "sheet,phi")->required();
    tits_pi->add_option("--relation", rel, "relation")->required();
    tits_pi->add_option("--K", Ks, "neighbourhood schedule, comma separated");
    tits_pi->add_option("--samples", samples, "samples per neighbourhood");
    auto* tits_half = verb(*tits, "half-pi", "lt_half | le_half | ge_half | gt_half | eq_half of [beta_center] and xi");
    tits_half->add_option("--center", center, "sheet,phi")->required();
    tits_half->add_option("--xi", xi, "sheet,phi")->required();
    tits_half->add_option("--relation", rel, "relation")->required();

    auto* quasi = verb(app, "quasigeodesic", "(1+eps, b)-quasigeodesic certificate for the two rays from a point");
    quasi->add_option("--xi", xi, "sheet,phi")->required();
    quasi->add_option("--eta", eta, "sheet,phi")->required();
    quasi->add_option("--epsilon", epsilon, "epsilon >= 0");
    quasi->add_option("--point", pt, "basepoint (default apex)");

    auto* semi = verb(app, "semiplane", "normed semiplane bounded by the line (xi, eta) through --point");
    semi->add_option("--xi", xi, "end at +infinity")->required();
    semi->add_option("--eta", eta, "end at -infinity")->required();
    semi->add_option("--point", pt, "point of the line (default apex)");
    semi->add_option("--K", Ks, "strip widths, comma separated");
    semi->add_option("--side", side, "any | eta_to_xi | xi_to_eta");

    auto* horo = verb(app, "horoball", "horoballs at infinity");
    horo->require_subcommand(1);
    auto* classify = verb(*horo, "classify", "classify boundary grid points for beta_center");
    classify->add_option("--center", center, "sheet,phi")->required();

    auto* scen = verb(app, "scenario", "registered scenarios");
    scen->require_subcommand(1);
    auto* scen_run = verb(*scen, "run", "run a scenario by name or file");
    scen_run->add_option("name", scenario_name, "scenario name or JSON file")->required();
    auto* scen_list = verb(*scen, "list", "list registered scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help is not an error
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        auto load = [&] { return builtin_or_file(g.space); };
        Resolution res;
        res.seed = g.seed;
        if (g.horizon) res.horizon = *g.horizon;

        if (*space_validate) {
            const ModelSpace s = load();
            emit(g, "space", json{{"valid", true}, {"space", space_to_json(s)}, {"cone_angle", s.cone_angle_total()}});
        } else if (*dist) {
            const ModelSpace s = load();
            const Route r = shortest_route(s, parse_point(from), parse_point(to));
            emit(g, "dist", json{{"distance", r.length}, {"route", to_json(r)}});
        } else if (*geo) {
            const ModelSpace s = load();
            const Polyline p = geodesic(s, parse_point(from), parse_point(to));
            if (g.format == "plot-points") write_text(g, "geodesic", "points", polyline_plot_points("geodesic", p));
            else emit(g, "geodesic", to_json(p));
        } else if (*ray_cmd) {
            const ModelSpace s = load();
            const Polyline p = ray(s, parse_point(pt), parse_ideal(xi), g.horizon.value_or(10.0));
            if (g.format == "plot-points") write_text(g, "ray", "points", polyline_plot_points("ray", p));
            else emit(g, "ray", to_json(p));
        } else if (*bus) {
            const ModelSpace s = load();
            const BusemannFunction f{parse_ideal(center), 0.0};
            const SpacePoint x = parse_point(pt);
            const BusemannEval e = busemann_eval(s, f, x);
            json j = {{"value", e.value}, {"closed_form", e.closed_form}, {"route_value", busemann_value(s, f, x)},
                      {"monotone", e.monotone}};
            if (e.bracket) j["bracket"] = to_json(*e.bracket);
            emit(g, "busemann", j);
        } else if (*delta_cmd) {
            const ModelSpace s = load();
            const SpacePoint o = pt.empty() ? apex(s) : parse_point(pt);
            emit(g, "delta", to_json(delta_infinity(s, parse_ideal(xi), parse_ideal(eta), o)));
        } else if (*tits_pi || *tits_half) {
            const ModelSpace s = load();
            const auto r = relation_from_string(rel);
            if (!r) throw GeometryError(ErrorKind::invalid_argument, "unknown relation '" + rel + "'");
            res.K_schedule = numbers(Ks);
            res.samples = samples;
            const TitsVerdict v = *tits_pi ? td_pi(s, parse_ideal(xi), parse_ideal(eta), *r, res)
                                           : td_half_pi(s, {parse_ideal(center), 0.0}, parse_ideal(xi), *r, res);
            emit(g, "tits", to_json(v));
        } else if (*quasi) {
            const ModelSpace s = load();
            const SpacePoint o = pt.empty() ? apex(s) : parse_point(pt);
            emit(g, "quasigeodesic",
                 to_json(certify_quasigeodesic(s, parse_ideal(xi), parse_ideal(eta), o, epsilon,
                                               g.horizon.value_or(1000.0))));
        } else if (*semi) {
            const ModelSpace s = load();
            const SpacePoint o = pt.empty() ? apex(s) : parse_point(pt);
            const LineCertificate line = is_line(s, o, parse_ideal(xi), parse_ideal(eta), 1000.0, g.tol.value_or(1e-6));
            if (!line.granted) {
                emit(g, "semiplane", json{{"found", false}, {"line", to_json(line)}, {"obstruction", "not a line"}});
                return 1;
            }
            SemiplaneConfig cfg;
            if (g.grid) cfg.grid = *g.grid;
            Side sd = Side::any;
            if (side == "eta_to_xi") sd = Side::eta_to_xi;
            else if (side == "xi_to_eta") sd = Side::xi_to_eta;
            else if (side != "any") throw GeometryError(ErrorKind::invalid_argument, "unknown side '" + side + "'");
            const std::string K = Ks == "10,100,1000" ? "1,4,16,64" : Ks;
            const SemiplaneModel m = detect_normed_semiplane(s, line, numbers(K), sd, cfg);
            emit(g, "semiplane", to_json(m));
            if (!m.found) return 1;
        } else if (*classify) {
            const ModelSpace s = load();
            const IdealHoroball h = horoball_at_infinity(s, {parse_ideal(center), 0.0}, g.grid.value_or(720));
            if (g.format == "csv") write_text(g, "classification", "csv", classification_csv(h));
            else if (g.format == "plot-points") write_text(g, "classification", "points", boundary_plot_points(s, h));
            else emit(g, "classification", to_json(h));
        } else if (*scen_list) {
            json j = json::array();
            for (const auto& n : scenario_names()) j.push_back({{"name", n}, {"description", find_scenario(n).description}});
            emit(g, "scenarios", j);
        } else if (*scen_run) {
            Scenario sc;
            if (std::filesystem::exists(scenario_name)) {
                std::ifstream in(scenario_name);
                sc = scenario_from_json(json::parse(in));
            } else {
                sc = find_scenario(scenario_name);
            }
            RunOverrides ov;
            if (app.get_option("--seed")->count()) ov.seed = g.seed;
            ov.tol = g.tol;
            ov.horizon = g.horizon;
            ov.grid = g.grid;
            const RunResult r = run_scenario(sc, ov);
            const auto fmt = *report_format_from_string(g.format);
            if (g.out.empty()) {
                if (fmt != ReportFormat::json) throw GeometryError(ErrorKind::invalid_argument, "--format csv and plot-points need --out");
                std::cout << dump_stable(r.report);
            } else {
                std::cerr << "wrote " << emit_report(r, fmt, g.out) << "\n";
            }
            for (const auto& e : r.report.at("expectations")) {
                std::cerr << (e.at("pass").get<bool>() ? "PASS " : "FAIL ") << e.at("id").get<std::string>() << "\n";
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cerr << "scenario " << sc.name << ": " << (r.passed ? "passed" : "failed") << " in " << secs << " s\n";
            return r.passed ? 0 : 1;
        }
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
