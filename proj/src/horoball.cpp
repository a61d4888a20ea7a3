#include "busemann/horoball.hpp"

#include <algorithm>
#include <cmath>

#include "busemann/minimize.hpp"

namespace busemann {

namespace {

constexpr double pi = 3.14159265358979323846;

// a - b reduced to (-period/2, period/2]
double angle_diff(double a, double b, double period) {
    double d = std::fmod(a - b, period);
    if (d <= -0.5 * period) d += period;
    if (d > 0.5 * period) d -= period;
    return d;
}

std::vector<double> unwrap(const std::vector<double>& v, double period) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = i == 0 ? v[0] : out[i - 1] + angle_diff(v[i], v[i - 1], period);
    return out;
}

double extrapolate(const std::vector<double>& x) {
    const size_t n = x.size();
    const double last = x[n - 1];
    if (n < 3) return last;
    const double d1 = x[n - 2] - x[n - 3], d2 = x[n - 1] - x[n - 2];
    const double den = d2 - d1;
    if (std::fabs(den) < 1e-300 || std::fabs(d2) == 0.0) return last;
    const double a = last - d2 * d2 / den;
    // Aitken is only trusted when it moves the estimate by a few steps at most
    if (!std::isfinite(a) || std::fabs(a - last) > 10.0 * std::fabs(d2)) return last;
    return a;
}

void cauchy_check(const std::vector<double>& x, double tol, const char* what) {
    const size_t n = x.size();
    const double last = std::fabs(x[n - 1] - x[n - 2]);
    const double first = std::fabs(x[1] - x[0]);
    if (last > tol || (n >= 3 && last > first)) {
        throw GeometryError(ErrorKind::non_convergent_sequence, std::string(what) + " sequence fails the Cauchy test");
    }
}

IdealClass classify(const Bracket& s) {
    const double b = kSlopeBand;
    if (s.hi < -b) return IdealClass::inside;
    if (s.hi <= b) return s.lo >= -b ? IdealClass::sphere : IdealClass::undetermined;
    if (s.lo > b) return IdealClass::outside;
    return IdealClass::undetermined;
}

IdealPoint direction_of(const SpacePoint& p) { return IdealPoint{p.sheet, std::atan2(p.x2, p.x1)}; }

}  // namespace

const char* to_string(IntersectionVerdict v) {
    return v == IntersectionVerdict::bounded ? "bounded" : "unbounded-at-resolution";
}

const char* to_string(IdealClass c) {
    switch (c) {
        case IdealClass::inside: return "inside";
        case IdealClass::sphere: return "sphere";
        case IdealClass::outside: return "outside";
        case IdealClass::undetermined: return "undetermined";
    }
    return "?";
}

Membership horoball_contains(const ModelSpace& space, const Horoball& hb, const SpacePoint& x) {
    const double fx = busemann_value(space, hb.function, x);
    const double fy = busemann_value(space, hb.function, hb.level_point);
    Membership m;
    m.gap = fx - fy;
    m.margin = std::fabs(m.gap);
    const double w = 1e-12 * (1.0 + std::fabs(fx) + std::fabs(fy));
    m.on_boundary = m.margin <= w;
    m.contained = m.gap <= 0.0 || m.on_boundary;
    return m;
}

IntersectionReport intersection_bounded(const ModelSpace& space, const BusemannFunction& phi,
                                        const BusemannFunction& psi, const SpacePoint& o,
                                        const std::vector<double>& R_schedule, int grid) {
    if (grid < 8) throw GeometryError(ErrorKind::invalid_argument, "grid must be >= 8");
    BusemannFunction f = phi, g = psi;
    f.offset -= busemann_value(space, phi, o);
    g.offset -= busemann_value(space, psi, o);
    auto G = [&](double R, double th) {
        const SpacePoint y = sphere_point(space, o, R, th);
        return std::max(busemann_value(space, f, y), busemann_value(space, g, y));
    };
    const double total = space.cone_angle_total();
    IntersectionReport rep;
    bool decided = false;
    for (double R : R_schedule) {
        int best = 0;
        double best_v = 1e300;
        const double h = total / grid;
        for (int i = 0; i < grid; ++i) {
            const double v = G(R, i * h);
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        const Minimum m = golden_section([&](double th) { return G(R, th); }, (best - 1) * h, (best + 1) * h, 1e-12);
        SphereMinimum w;
        w.R = R;
        w.theta = best * h;
        w.value = best_v;
        if (m.value < best_v) {
            w.theta = m.arg;
            w.value = m.value;
        }
        w.theta = std::fmod(w.theta + total, total);
        w.point = canonicalize(space, sphere_point(space, o, R, w.theta));
        rep.witnesses.push_back(w);
        const double tol = 1e-9 * (1.0 + R);
        if (!decided && w.value > tol) {
            decided = true;
            rep.verdict = IntersectionVerdict::bounded;
            rep.margin = w.value;
            rep.R_decided = R;
        }
    }
    if (!decided && !R_schedule.empty()) rep.R_decided = R_schedule.back();
    return rep;
}

std::vector<IdealPoint> boundary_grid(const ModelSpace& space, int per_sheet) {
    if (per_sheet < 1) throw GeometryError(ErrorKind::invalid_argument, "grid must be >= 1");
    std::vector<IdealPoint> out;
    if (!space.is_fan()) {
        for (int j = 0; j < per_sheet; ++j) out.push_back(canonicalize(space, IdealPoint{0, 2.0 * pi * j / per_sheet}));
        return out;
    }
    // by increasing cone angle: sheet i covers [i pi, (i+1) pi) with phi running from pi down
    for (int i = 0; i < space.sheet_count(); ++i) {
        for (int j = per_sheet; j >= 1; --j) out.push_back(canonicalize(space, IdealPoint{i, pi * j / per_sheet}));
    }
    return out;
}

IdealHoroball horoball_at_infinity(const ModelSpace& space, const BusemannFunction& f, int per_sheet) {
    IdealHoroball h;
    h.center = f;
    h.per_sheet = per_sheet;
    const SpacePoint o = apex(space);
    for (const IdealPoint& xi : boundary_grid(space, per_sheet)) {
        ClassifiedPoint c;
        c.xi = xi;
        c.slope = asymptotic_slope(space, f, o, xi);
        c.cls = classify(c.slope);
        h.points.push_back(c);
    }
    return h;
}

ClosureReport boundary_closure_check(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& y,
                                     int per_sheet) {
    const IdealHoroball h = horoball_at_infinity(space, f, per_sheet);
    const double level = busemann_value(space, f, y);
    ClosureReport rep;
    for (const ClassifiedPoint& c : h.points) {
        ClosureEntry e;
        e.xi = c.xi;
        e.cls = c.cls;
        const AsymptoticRay r = asymptotic_ray(space, y, c.xi);
        e.ray_stays = true;
        e.max_gap = -1e300;
        for (double T = 1.0; T <= 1073741824.0; T *= 2.0) {
            const double gap = busemann_value(space, f, r.at(space, T)) - level;
            e.max_gap = std::max(e.max_gap, gap);
            if (gap > 1e-9 * (1.0 + std::fabs(level) + T)) {
                e.ray_stays = false;
                e.exit_T = T;
                break;
            }
        }
        if (c.cls == IdealClass::inside || c.cls == IdealClass::outside) {
            e.hard_discrepancy = e.ray_stays != (c.cls == IdealClass::inside);
            if (e.hard_discrepancy) ++rep.hard_discrepancies; else ++rep.agreements;
        } else {
            ++rep.band_points;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

HorosphereTrace horosphere_accumulation(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& y,
                                        const IdealPoint& xi) {
    const IdealPoint c0 = canonicalize(space, xi);
    if (!(c0.phi > 0.0 && c0.phi < pi)) {
        throw GeometryError(ErrorKind::invalid_argument, "horosphere construction needs an interior direction");
    }
    HorosphereTrace tr;
    tr.xi = c0;
    const AsymptoticRay r = asymptotic_ray(space, y, c0);
    const double level = busemann_value(space, f, y);
    const NormGauge& gauge = space.sheet(c0.sheet);
    const double total = space.cone_angle_total();
    const double target = cone_angle(space, c0);
    for (double t = 16.0; t <= 16777216.0; t *= 4.0) {
        const SpacePoint c = r.at(space, t);
        const double g = busemann_value(space, f, c) - level;
        SpacePoint z = c;
        if (std::fabs(g) > 1e-12 * (1.0 + t)) {
            // walk off c(t) in-sheet until the level is crossed, then bisect
            const Vec2 base = c.local();
            bool found = false;
            for (double rho = std::fabs(g); !found && rho < t; rho *= 2.0) {
                for (int a = 0; a < 360 && !found; ++a) {
                    const double ang = 2.0 * pi * a / 360.0;
                    Vec2 w{std::cos(ang), std::sin(ang)};
                    w = (rho / gauge.norm(w)) * w;
                    const Vec2 q = base + w;
                    if (q.y < 0.0) continue;
                    const double gq = busemann_value(space, f, {c.sheet, q.x, q.y}) - level;
                    if ((g < 0.0) != (gq < 0.0)) {
                        double lo = 0.0, hi = 1.0;
                        for (int i = 0; i < 100; ++i) {
                            const double mid = 0.5 * (lo + hi);
                            const Vec2 p = base + mid * w;
                            const double gm = busemann_value(space, f, {c.sheet, p.x, p.y}) - level;
                            if ((gm < 0.0) == (g < 0.0)) lo = mid; else hi = mid;
                        }
                        const Vec2 p = base + hi * w;
                        z = SpacePoint{c.sheet, p.x, p.y};
                        found = true;
                    }
                }
            }
            if (!found) break;
        }
        tr.t.push_back(t);
        tr.level_gap.push_back(std::fabs(g));
        tr.angle_gap.push_back(std::fabs(angle_diff(cone_angle(space, direction_of(z)), target, total)));
    }
    tr.accumulates = !tr.t.empty() && tr.angle_gap.back() < 1e-3 && tr.angle_gap.back() <= tr.angle_gap.front() &&
                     tr.level_gap.back() / tr.t.back() < 1e-3;
    return tr;
}

HorolimitReport horolimit_check(const ModelSpace& space, const std::vector<BusemannFunction>& phis,
                                const std::vector<IdealPoint>& xis, double cauchy_tol) {
    if (phis.size() != xis.size() || phis.size() < 2) {
        throw GeometryError(ErrorKind::invalid_argument, "need two sequences of equal length >= 2");
    }
    const double total = space.cone_angle_total();
    std::vector<double> ac, ax;
    for (size_t i = 0; i < phis.size(); ++i) {
        ac.push_back(cone_angle(space, phis[i].center));
        ax.push_back(cone_angle(space, xis[i]));
    }
    ac = unwrap(ac, total);
    ax = unwrap(ax, total);
    cauchy_check(ac, cauchy_tol, "center");
    cauchy_check(ax, cauchy_tol, "ideal point");

    HorolimitReport rep;
    rep.hypotheses_hold = true;
    for (size_t i = 0; i < phis.size(); ++i) {
        rep.hypotheses.push_back(td_half_pi(space, phis[i], xis[i], Relation::le_half));
        rep.hypotheses_hold = rep.hypotheses_hold && rep.hypotheses.back().outcome == Outcome::holds;
    }
    const double tc = std::fmod(std::fmod(extrapolate(ac), total) + total, total);
    const double tx = std::fmod(std::fmod(extrapolate(ax), total) + total, total);
    rep.limit_center = BusemannFunction{ideal_from_cone_angle(space, tc), 0.0};
    rep.limit_xi = ideal_from_cone_angle(space, tx);
    rep.limit_slope = asymptotic_slope(space, rep.limit_center, apex(space), rep.limit_xi);
    rep.conclusion = rep.limit_slope.hi <= kSlopeBand;
    return rep;
}

}  // namespace busemann
