// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any criterion fails.
// Usage: acceptance [path-to-busemann-cli]

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "busemann/horoball.hpp"
#include "busemann/scenario.hpp"
#include "oracles/grid_dijkstra.hpp"
#include "support.hpp"

using namespace busemann;
using namespace testing_support;

namespace {

// Tolerances and sizes, fixed here rather than taken from the library defaults.
constexpr double kConvexSlack = -1e-9;
constexpr int kConvexTriples = 10000;
constexpr double kConvexSeconds = 60;

constexpr int kGridCells = 200;  // cells per side; nodes = cells + 1 so that x1 = 0 is a column
constexpr double kGridHalfWidth = 10.0;
constexpr int kGridPairs = 1000;
constexpr double kGridRelative = 0.02;
constexpr double kGridAbsolute = 1e-6;
constexpr double kGridSeconds = 120;

constexpr int kDeltaPairs = 1000;
constexpr double kDeltaTol = 1e-6;

constexpr int kBasepointCases = 100;

constexpr int kSlopeGrid = 360;
constexpr double kSlopeTol = 1e-6;
constexpr int kBusemannCases = 1000;
constexpr double kBusemannTol = 1e-6;

constexpr double kCounterSlope = -1e-3;
constexpr double kCounterSeconds = 600;

constexpr double kParabolaSeconds = 1;
constexpr double kSemiplaneTol = 1e-6;
constexpr double kSemiplaneSeconds = 300;

constexpr int kTriangleInstances = 500;
constexpr int kClosureGrid = 720;
constexpr int kClosureCenters = 5;

struct Line {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

ModelSpace fan_p4() { return fan3(4.0); }

// 1. |m n| <= |y z| / 2 for midpoints m of [x y] and n of [x z]
Line busemann_convexity() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = INFINITY;
    std::string where;
    std::mt19937_64 rng(1001);
    for (const auto& [name, s] : standard_spaces()) {
        for (int i = 0; i < kConvexTriples; ++i) {
            const SpacePoint x = random_point(s, rng), y = random_point(s, rng), z = random_point(s, rng);
            const double slack = 0.5 * distance(s, y, z) - distance(s, midpoint(s, x, y), midpoint(s, x, z));
            if (slack < worst) {
                worst = slack;
                where = name;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst >= kConvexSlack && secs < kConvexSeconds,
            fmt("min slack %.3e (%s) over 4 x %d triples, bound %.0e; %.1f s < %.0f s", worst, where.c_str(),
                kConvexTriples, kConvexSlack, secs, kConvexSeconds)};
}

// 2. engine vs grid shortest paths on the Euclidean 3-fan
Line distance_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSpace s = fan3(2.0);
    const oracle::GridDijkstra grid(3, kGridCells + 1, kGridHalfWidth);
    std::mt19937_64 rng(1002);
    const int n = grid.n();
    double worst_rel = 0.0, worst_over = -INFINITY;
    int pairs = 0;
    const int sources = 10;
    for (int k = 0; k < sources; ++k) {
        const int si = pick(rng, 3), sa = pick(rng, n), sb = pick(rng, n);
        const auto dist = grid.distances_from(si, sa, sb);
        const SpacePoint src{si, grid.x1(sa), grid.x2(sb)};
        for (int j = 0; j < kGridPairs / sources;) {
            const int ti = pick(rng, 3), ta = pick(rng, n), tb = pick(rng, n);
            if (grid.node(ti, ta, tb) == grid.node(si, sa, sb)) continue;
            const double o = dist[grid.node(ti, ta, tb)];
            const double e = distance(s, src, SpacePoint{ti, grid.x1(ta), grid.x2(tb)});
            worst_rel = std::max(worst_rel, std::fabs(e - o) / o);
            worst_over = std::max(worst_over, e - o);
            ++pairs;
            ++j;
        }
    }
    const double secs = seconds_since(t0);
    return {worst_rel <= kGridRelative && worst_over <= kGridAbsolute && secs < kGridSeconds,
            fmt("%d pairs on a %dx%d grid per sheet: max |e-o|/o %.4f <= %.2f, max e-o %.2e <= %.0e; %.1f s < %.0f s",
                pairs, kGridCells, kGridCells, worst_rel, kGridRelative, worst_over, kGridAbsolute, secs,
                kGridSeconds)};
}

// 3. same-sheet delta against gauge(u - v) / 2, computed here from the p-norm formula
Line delta_closed_form() {
    std::mt19937_64 rng(1003);
    auto unit_p = [](double p, double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double n = std::pow(std::pow(std::fabs(c), p) + std::pow(std::fabs(s), p), 1.0 / p);
        return std::pair<double, double>{c / n, s / n};
    };
    auto pnorm = [](double p, double x, double y) {
        return std::pow(std::pow(std::fabs(x), p) + std::pow(std::fabs(y), p), 1.0 / p);
    };
    double err_p4 = 0.0, err_e = 0.0;
    const ModelSpace p4 = p4_plane(), e2 = euclidean();
    for (int i = 0; i < kDeltaPairs; ++i) {
        const double a = uniform(rng, 0, 2 * pi), b = uniform(rng, 0, 2 * pi);
        const SpacePoint o = random_point(p4, rng, 5.0);
        const auto [ux, uy] = unit_p(4.0, a);
        const auto [vx, vy] = unit_p(4.0, b);
        const double want = 0.5 * pnorm(4.0, ux - vx, uy - vy);
        err_p4 = std::max(err_p4, std::fabs(delta_infinity(p4, {0, a}, {0, b}, o).bracket.mid() - want));

        double theta = std::fabs(a - b);
        theta = std::min(theta, 2 * pi - theta);
        err_e = std::max(err_e, std::fabs(delta_infinity(e2, {0, a}, {0, b}, o).bracket.mid() - std::sin(theta / 2)));
    }
    return {err_p4 < kDeltaTol && err_e < kDeltaTol,
            fmt("%d pairs: p=4 max error %.2e, Euclidean sin(theta/2) max error %.2e, tol %.0e", kDeltaPairs, err_p4,
                err_e, kDeltaTol)};
}

// 4. delta brackets from two basepoints
Line basepoint_independence() {
    std::mt19937_64 rng(1004);
    const ModelSpace s = fan_p4();
    int bad = 0;
    double worst = -INFINITY;
    for (int i = 0; i < kBasepointCases; ++i) {
        const IdealPoint xi = random_ideal(s, rng), eta = random_ideal(s, rng);
        const SpacePoint o = random_point(s, rng, 5.0), o2 = random_point(s, rng, 5.0);
        const BasepointReport r = basepoint_invariance_check(s, xi, eta, o, o2);
        const double bound = 2.0 * distance(s, o, o2) / r.horizon + r.at_o.bracket.width() + r.at_o2.bracket.width();
        const double diff = std::fabs(r.at_o.bracket.mid() - r.at_o2.bracket.mid());
        worst = std::max(worst, diff - bound);
        if (!(diff < bound || (diff == 0.0 && bound == 0.0))) ++bad;
    }
    return {bad == 0, fmt("%d cases in the 3-sheet p=4 fan: %d violations, max (difference - bound) %.3e",
                          kBasepointCases, bad, worst)};
}

// 5. Euclidean slopes and route-formula Busemann values against the limit definition
Line slope_correspondence() {
    const ModelSpace e2 = euclidean();
    const BusemannFunction f{{0, 0.0}, 0.0};
    double slope_err = 0.0;
    for (int j = 0; j < kSlopeGrid; ++j) {
        const double theta = 2 * pi * j / kSlopeGrid;
        const Bracket b = asymptotic_slope(e2, f, {0, 1.5, -0.5}, {0, theta});
        slope_err = std::max({slope_err, std::fabs(b.lo + std::cos(theta)), std::fabs(b.hi + std::cos(theta))});
    }
    // limit d(x, c(t)) - t with one Richardson step: the error of d - t is a / t + O(1/t^2)
    std::mt19937_64 rng(1005);
    double bus_err = 0.0;
    const auto spaces = standard_spaces();
    for (int i = 0; i < kBusemannCases; ++i) {
        const ModelSpace& s = spaces[static_cast<size_t>(i) % spaces.size()].space;
        const IdealPoint xi = random_ideal(s, rng);
        const SpacePoint x = random_point(s, rng, 5.0);
        auto g = [&](double t) { return distance(s, x, point_on_apex_ray(s, xi, t)) - t; };
        const double t = std::ldexp(1.0, 20);
        const double limit = 2.0 * g(2.0 * t) - g(t);
        bus_err = std::max(bus_err, std::fabs(busemann_value(s, {xi, 0.0}, x) - limit));
    }
    return {slope_err < kSlopeTol && bus_err < kBusemannTol,
            fmt("slope vs -cos(theta) on %d angles: max error %.2e; Busemann route formula vs limit on %d cases: "
                "max error %.2e; tol %.0e",
                kSlopeGrid, slope_err, kBusemannCases, bus_err, kSlopeTol)};
}

struct CounterParts {
    TitsVerdict xi_zeta, zeta_eta, xi_eta;
    IntersectionReport horoballs;
    bool pass = false;
    std::string detail;
};

CounterParts run_counterexample(const IdealPoint& xi, const IdealPoint& zeta, const IdealPoint& eta) {
    const ModelSpace s = fan_p4();
    Resolution res;
    res.K_schedule = {10.0, 100.0, 1000.0};
    res.samples = 64;
    CounterParts c;
    c.xi_zeta = td_half_pi(s, {xi, 0.0}, zeta, Relation::lt_half, res);
    c.zeta_eta = td_half_pi(s, {zeta, 0.0}, eta, Relation::lt_half, res);
    c.xi_eta = td_pi(s, xi, eta, Relation::gt_pi, res);
    c.horoballs = intersection_bounded(s, {xi, 0.0}, {eta, 0.0}, apex(s), {1, 10, 100, 1000, 10000});

    const bool a = c.xi_zeta.outcome == Outcome::holds && c.xi_zeta.slope && c.xi_zeta.slope->hi < kCounterSlope;
    const bool b = c.zeta_eta.outcome == Outcome::holds && c.zeta_eta.slope && c.zeta_eta.slope->hi < kCounterSlope;
    const bool d = c.xi_eta.outcome == Outcome::holds;
    const bool e = c.horoballs.verdict == IntersectionVerdict::bounded && c.horoballs.margin > 0.0;
    c.pass = a && b && d && e;
    c.detail = fmt("Td(b_xi,zeta)<pi/2 %s (slope hi %.4f); Td(b_zeta,eta)<pi/2 %s (slope hi %.4f); "
                   "Td(xi,eta)>pi %s (delta lo %.6f); horoballs %s (margin %.3g)",
                   to_string(c.xi_zeta.outcome), c.xi_zeta.slope ? c.xi_zeta.slope->hi : NAN,
                   to_string(c.zeta_eta.outcome), c.zeta_eta.slope ? c.zeta_eta.slope->hi : NAN,
                   to_string(c.xi_eta.outcome), c.xi_eta.delta ? c.xi_eta.delta->bracket.lo : NAN,
                   to_string(c.horoballs.verdict), c.horoballs.margin);
    return c;
}

const IdealPoint kZeta{0, pi / 3};
const IdealPoint kEta{0, 5 * pi / 6 + 0.05};

// 6. the counterexample with the labels as stated
Line counterexample(std::string& relabelled_note) {
    const auto t0 = std::chrono::steady_clock::now();
    const CounterParts lit = run_counterexample({2, 5 * pi / 6}, kZeta, kEta);
    const double secs = seconds_since(t0);
    const CounterParts rel = run_counterexample({1, 5 * pi / 6}, kZeta, kEta);
    relabelled_note = std::string(rel.pass ? "all four claims hold" : "claims do not all hold") + ": " + rel.detail;
    return {lit.pass && secs < kCounterSeconds, fmt("xi=(2,5pi/6): %s; %.1f s", lit.detail.c_str(), secs)};
}

// 7. semiparabola gaps
Line parabola() {
    const auto t0 = std::chrono::steady_clock::now();
    const ParabolaWitness a = parabola_gap(1.5, 1.0), b = parabola_gap(1.5, 10.0);
    const double secs = seconds_since(t0);
    return {a.gap() > 1.0 && b.gap() > 10.0 && secs < kParabolaSeconds,
            fmt("b=1: gap %.6g at x0 %.6g; b=10: gap %.6g at x0 %.6g; %.3f s", a.gap(), a.x0, b.gap(), b.x0, secs)};
}

// 8. sheet-boundary line of the p=4 fan: eq_pi, unbounded horoball intersection, semiplane
Line semiplane_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSpace s = fan_p4();
    const IdealPoint xi{1, 0.0}, eta{1, pi};
    Resolution res;
    res.K_schedule = {10.0, 100.0, 1000.0};
    res.samples = 64;
    const TitsVerdict eq = td_pi(s, xi, eta, Relation::eq_pi, res);
    const IntersectionReport hb = intersection_bounded(s, {xi, 0.0}, {eta, 0.0}, apex(s), {1, 10, 100, 1000, 10000});
    const LineCertificate line = is_line(s, apex(s), xi, eta, 1000.0, 1e-6);
    const SemiplaneModel sp = detect_normed_semiplane(s, line, {1, 4, 16, 64}, Side::eta_to_xi);
    const double secs = seconds_since(t0);
    const bool ok = eq.outcome == Outcome::holds && hb.verdict == IntersectionVerdict::unbounded_at_resolution &&
                    line.granted && sp.found && sp.strips.size() == 4 && sp.max_discrepancy <= kSemiplaneTol &&
                    secs < kSemiplaneSeconds;
    return {ok, fmt("eq_pi %s; horoballs %s up to R=1e4; semiplane %s, max strip discrepancy %.2e <= %.0e; %.1f s",
                    to_string(eq.outcome), to_string(hb.verdict), sp.found ? "found" : sp.obstruction.c_str(),
                    sp.max_discrepancy, kSemiplaneTol, secs)};
}

// Proposals near the first point make hypothesis-satisfying instances common; every instance is still filtered.
IdealPoint near(const ModelSpace& s, const IdealPoint& a, std::mt19937_64& rng) {
    return ideal_from_cone_angle(s, cone_angle(s, a) + uniform(rng, -0.6 * pi, 0.6 * pi));
}

// 9. both theorems on random instances, and the chained pattern on the counterexample triple
Line triangle_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1009);
    Resolution res;
    res.K_schedule = {10.0, 100.0};
    res.samples = 16;
    int violations = 0, instances = 0, undetermined = 0, draws = 0;
    for (const auto& [name, s] : standard_spaces()) {
        for (TriangleMode mode : {TriangleMode::horofunction_two_points, TriangleMode::two_horofunctions_one_point}) {
            int found = 0;
            while (found < kTriangleInstances && draws < 400000) {
                ++draws;
                const IdealPoint a = random_ideal(s, rng);
                IdealPoint b, c;
                if (mode == TriangleMode::horofunction_two_points) {
                    b = near(s, a, rng);
                    c = near(s, a, rng);
                } else {
                    c = near(s, a, rng);
                    b = near(s, c, rng);
                }
                const TriangleReport r = triangle_check_pi_half(s, mode, a, b, c, res);
                if (!r.hypotheses_hold) continue;
                ++found;
                if (r.counter_instance) ++violations;
                if (r.conclusion.outcome == Outcome::undetermined) ++undetermined;
            }
            instances += found;
        }
    }
    const ModelSpace s = fan_p4();
    Resolution full;
    full.K_schedule = {10.0, 100.0, 1000.0};
    full.samples = 64;
    const TriangleReport chained = triangle_check_pi_half(s, TriangleMode::chained, {1, 5 * pi / 6}, kZeta, kEta, full);
    const bool ok = instances == 2 * 4 * kTriangleInstances && violations == 0 && chained.counter_instance;
    return {ok, fmt("%d instances (2 theorems x 4 spaces x %d): %d violations, %d undetermined conclusions; "
                    "chained pattern on xi=(1,5pi/6), zeta, eta: %s; %.1f s",
                    instances, kTriangleInstances, violations, undetermined,
                    chained.counter_instance ? "violation reproduced" : "no violation", seconds_since(t0))};
}

// 10. horoball closure and pointwise agreement with the pi/2 relations
Line horoball_closure() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1010);
    int hard = 0, mismatches = 0, points = 0;
    for (const auto& [name, s] : standard_spaces()) {
        const int per_sheet = s.is_fan() ? kClosureGrid / s.sheet_count() : kClosureGrid;
        for (int c = 0; c < kClosureCenters; ++c) {
            const BusemannFunction f{random_ideal(s, rng), 0.0};
            const ClosureReport cr = boundary_closure_check(s, f, random_point(s, rng, 3.0), per_sheet);
            hard += cr.hard_discrepancies;
            const IdealHoroball h = horoball_at_infinity(s, f, per_sheet);
            for (const ClassifiedPoint& p : h.points) {
                ++points;
                const Outcome lt = td_half_pi(s, f, p.xi, Relation::lt_half).outcome;
                const Outcome eq = td_half_pi(s, f, p.xi, Relation::eq_half).outcome;
                const Outcome gt = td_half_pi(s, f, p.xi, Relation::gt_half).outcome;
                IdealClass want = IdealClass::undetermined;
                if (lt == Outcome::holds) want = IdealClass::inside;
                else if (eq == Outcome::holds) want = IdealClass::sphere;
                else if (gt == Outcome::holds) want = IdealClass::outside;
                if (want != p.cls) ++mismatches;
            }
        }
    }
    return {hard == 0 && mismatches == 0,
            fmt("%d centers x 4 spaces on %d-point grids: %d hard discrepancies, %d of %d classifications differ "
                "from td_half_pi; %.1f s",
                kClosureCenters, kClosureGrid, hard, mismatches, points, seconds_since(t0))};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 11. byte-identical reports, in process and through the CLI when its path is given
Line determinism(const char* cli) {
    int differ = 0, runs = 0;
    for (const auto& name : scenario_names()) {
        const Scenario sc = find_scenario(name);
        RunOverrides o;
        o.seed = 12345;
        if (dump_stable(run_scenario(sc, o).report) != dump_stable(run_scenario(sc, o).report)) ++differ;
        ++runs;
    }
    std::string cli_note = "CLI not given";
    if (cli) {
        namespace fs = std::filesystem;
        const fs::path base = fs::temp_directory_path() / "busemann_acceptance";
        fs::remove_all(base);
        int cli_differ = 0;
        for (const auto& name : scenario_names()) {
            std::string out[2];
            for (int k = 0; k < 2; ++k) {
                const fs::path dir = base / std::to_string(k);
                fs::create_directories(dir);
                const std::string cmd = std::string("\"") + cli + "\" --seed 12345 --out \"" + dir.string() +
                                        "\" scenario run " + name + " >/dev/null 2>&1";
                const int rc = std::system(cmd.c_str());
                (void)rc;  // the literal counterexample exits 1 by design
                out[k] = slurp((dir / (name + ".json")).string());
            }
            if (out[0].empty() || out[0] != out[1]) ++cli_differ;
        }
        fs::remove_all(base);
        differ += cli_differ;
        cli_note = fmt("CLI: %d of %zu scenario reports differ", cli_differ, scenario_names().size());
    }
    return {differ == 0, fmt("%d scenarios run twice in process with seed 12345; %s", runs, cli_note.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
    const char* cli = argc > 1 ? argv[1] : nullptr;
    int failed = 0;
    auto report = [&](int id, const char* name, const std::function<Line()>& run) {
        Line l;
        try {
            l = run();
        } catch (const std::exception& e) {
            l = {false, std::string("exception: ") + e.what()};
        }
        if (!l.pass) ++failed;
        std::printf("[%s] %2d %-26s %s\n", l.pass ? "PASS" : "FAIL", id, name, l.detail.c_str());
        std::fflush(stdout);
    };
    std::string relabelled;
    report(1, "busemann-convexity", busemann_convexity);
    report(2, "distance-oracle", distance_oracle);
    report(3, "delta-closed-form", delta_closed_form);
    report(4, "basepoint-independence", basepoint_independence);
    report(5, "slope-correspondence", slope_correspondence);
    report(6, "counterexample", [&] { return counterexample(relabelled); });
    if (!relabelled.empty()) std::printf("[INFO]    with xi=(1,5pi/6) instead: %s\n", relabelled.c_str());
    report(7, "semiparabola", parabola);
    report(8, "semiplane-equivalence", semiplane_equivalence);
    report(9, "triangle-sweep", triangle_sweep);
    report(10, "horoball-closure", horoball_closure);
    report(11, "determinism", [&] { return determinism(cli); });
    std::printf("%d of 11 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
