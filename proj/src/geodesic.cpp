#include "busemann/geodesic.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "busemann/minimize.hpp"

namespace busemann {

namespace {

// Local coordinates of the seam point at parameter s, seen from `sheet`.
// Seam m joins the positive ray of sheet m with the negative ray of sheet m+1.
double seam_sign(const ModelSpace& space, int seam, int sheet) {
    return sheet == seam ? 1.0 : (sheet == space.next(seam) ? -1.0 : 0.0);
}

double seam_gauge(const ModelSpace& space) { return space.sheet(0).norm({1.0, 0.0}); }

bool same_gauge(const NormGauge& g, const NormGauge& h) {
    const Mat2 &a = g.A(), &b = h.A();
    return g.p() == h.p() && a.a == b.a && a.b == b.b && a.c == b.c && a.d == b.d;
}

// Two sheets with one gauge unfold to a single normed plane ((x, y) -> (-x, -y) is an
// isometry), so the optimal crossing is where the straight line meets the seam.  This
// avoids minimizing along directions in which the gauge is nearly flat.
Minimum straight_crossing(double cross_x, double sa, const std::function<double(double)>& f) {
    const double s = std::max(0.0, sa * cross_x);
    return {s, f(s)};
}

// d/ds g(P - (sign*s, 0)), with the zero-vector kink given derivative 0.
double leg_slope(const NormGauge& g, Vec2 P, double sign, double s) {
    const Vec2 v{P.x - sign * s, P.y};
    if (v.x == 0.0 && v.y == 0.0) return 0.0;
    return -sign * g.gradient(v).x;
}

Route seam_route(const ModelSpace& space, int seam, const Presentation& a, const Presentation& b) {
    const NormGauge& ga = space.sheet(a.sheet);
    const NormGauge& gb = space.sheet(b.sheet);
    const double sa = seam_sign(space, seam, a.sheet);
    const double sb = seam_sign(space, seam, b.sheet);
    auto f = [&](double s) {
        return ga.norm({a.local.x - sa * s, a.local.y}) + gb.norm({b.local.x - sb * s, b.local.y});
    };
    auto df = [&](double s) { return leg_slope(ga, a.local, sa, s) + leg_slope(gb, b.local, sb, s); };
    Minimum m;
    const double h = a.local.y + b.local.y;
    if (same_gauge(ga, gb) && h > 0.0) {
        // segment from a to -b in a's frame
        const double lam = a.local.y / h;
        m = straight_crossing(a.local.x + lam * (-b.local.x - a.local.x), sa, f);
    } else {
        const double c = seam_gauge(space);
        const double hi = (ga.norm(a.local) + gb.norm(b.local)) / c + 1.0;
        m = minimize_convex(f, df, 0.0, hi);
    }
    Route r;
    r.kind = RouteKind::seam;
    r.seam = seam;
    r.s = m.arg;
    r.length = m.value;
    r.from = a;
    r.to = b;
    r.crossing_from = {sa * m.arg, 0.0};
    r.crossing_to = {sb * m.arg, 0.0};
    return r;
}

SpacePoint to_point(const ModelSpace& space, int sheet, Vec2 v) {
    if (space.is_fan() && v.y < 0.0) v.y = 0.0;
    return canonicalize(space, SpacePoint{sheet, v.x, v.y});
}

void push_leg(std::vector<Leg>& legs, const ModelSpace& space, int sheet, Vec2 a, Vec2 b) {
    const double len = space.sheet(sheet).norm(b - a);
    if (len > 0.0) legs.push_back({sheet, a, b, len});
}

double legs_length(const std::vector<Leg>& legs) {
    double s = 0.0;
    for (const Leg& l : legs) s += l.length;
    return s;
}

SpacePoint walk(const ModelSpace& space, const std::vector<Leg>& legs, double t, bool& inside) {
    double acc = 0.0;
    for (const Leg& l : legs) {
        if (t <= acc + l.length) {
            const double lam = std::clamp((t - acc) / l.length, 0.0, 1.0);
            inside = true;
            return to_point(space, l.sheet, lerp(l.start, l.end, lam));
        }
        acc += l.length;
    }
    inside = false;
    return {};
}

double residual_at(const ModelSpace& space, const SpacePoint& m, const IdealPoint& xi,
                   const IdealPoint& eta, double T) {
    const AsymptoticRay a = asymptotic_ray(space, m, xi);
    const AsymptoticRay b = asymptotic_ray(space, m, eta);
    return std::max(0.0, 2.0 * T - distance(space, a.at(space, T), b.at(space, T)));
}

}  // namespace

SpacePoint Polyline::at(const ModelSpace& space, double t) const {
    if (legs.empty()) throw GeometryError(ErrorKind::invalid_argument, "empty polyline");
    t = std::clamp(t, 0.0, total_length);
    bool inside = false;
    SpacePoint p = walk(space, legs, t, inside);
    if (!inside) p = to_point(space, legs.back().sheet, legs.back().end);
    return p;
}

Polyline Polyline::truncated(double T) const {
    Polyline out;
    double acc = 0.0;
    for (const Leg& l : legs) {
        if (acc + l.length <= T) {
            out.legs.push_back(l);
            acc += l.length;
            continue;
        }
        const double lam = (T - acc) / l.length;
        if (lam > 0.0) {
            Vec2 e = lerp(l.start, l.end, lam);
            out.legs.push_back({l.sheet, l.start, e, T - acc});
            acc = T;
        }
        break;
    }
    out.total_length = acc;
    return out;
}

Route shortest_route(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q) {
    const auto pp = presentations(space, p);
    const auto qp = presentations(space, q);

    Route best;
    bool have = false;
    for (const auto& a : pp) {
        for (const auto& b : qp) {
            if (a.sheet != b.sheet) continue;
            const double len = space.sheet(a.sheet).norm(b.local - a.local);
            if (!have || len < best.length) {
                best = Route{RouteKind::direct, -1, 0.0, len, a, b, {}, {}};
                have = true;
            }
        }
    }
    if (have || !space.is_fan()) return best;

    // Routes over two or more seams pass through the apex; one seam or the apex suffices.
    auto consider = [&](const Route& r) {
        if (!have || r.length < best.length - 1e-13 * (1.0 + best.length)) {
            best = r;
            have = true;
        }
    };
    const int k = space.sheet_count();
    for (int m = 0; m < k; ++m) {
        const int lo = m, hi = space.next(m);
        for (const auto& a : pp) {
            for (const auto& b : qp) {
                if ((a.sheet == lo && b.sheet == hi) || (a.sheet == hi && b.sheet == lo)) {
                    consider(seam_route(space, m, a, b));
                }
            }
        }
    }
    Route ap;
    ap.kind = RouteKind::apex;
    ap.from = pp.front();
    ap.to = qp.front();
    ap.length = space.sheet(ap.from.sheet).norm(ap.from.local) + space.sheet(ap.to.sheet).norm(ap.to.local);
    consider(ap);
    return best;
}

double distance(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q) {
    return shortest_route(space, p, q).length;
}

namespace {

Polyline build_polyline(const ModelSpace& space, const Route& r) {
    Polyline out;
    switch (r.kind) {
        case RouteKind::direct:
            push_leg(out.legs, space, r.from.sheet, r.from.local, r.to.local);
            break;
        case RouteKind::seam:
            push_leg(out.legs, space, r.from.sheet, r.from.local, r.crossing_from);
            push_leg(out.legs, space, r.to.sheet, r.crossing_to, r.to.local);
            break;
        case RouteKind::apex:
            push_leg(out.legs, space, r.from.sheet, r.from.local, {0.0, 0.0});
            push_leg(out.legs, space, r.to.sheet, {0.0, 0.0}, r.to.local);
            break;
    }
    out.total_length = legs_length(out.legs);
    return out;
}

}  // namespace

Polyline route_polyline(const ModelSpace& space, const Route& r) { return build_polyline(space, r); }

Polyline geodesic(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q) {
    if (same_point(space, p, q)) {
        throw GeometryError(ErrorKind::coincident_endpoints, "geodesic between coincident points");
    }
    return build_polyline(space, shortest_route(space, p, q));
}

SpacePoint midpoint(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q) {
    if (same_point(space, p, q)) return canonicalize(space, p);
    const Polyline g = geodesic(space, p, q);
    return g.at(space, 0.5 * g.total_length);
}

Polyline ray(const ModelSpace& space, const SpacePoint& x, const IdealPoint& xi, double T,
             const Tolerances& tol) {
    if (!(T > 0.0)) throw GeometryError(ErrorKind::invalid_argument, "ray horizon must be positive");
    for (const auto& a : presentations(space, x)) {
        for (const auto& b : ideal_presentations(space, xi)) {
            if (a.sheet != b.sheet) continue;
            Polyline out;
            out.legs.push_back({a.sheet, a.local, a.local + T * b.local, T});
            out.total_length = T;
            return out;
        }
    }
    std::optional<SpacePoint> prev;
    for (double t = 1.0; t <= tol.ray_cap; t *= 2.0) {
        const SpacePoint c = point_on_apex_ray(space, xi, t);
        if (distance(space, x, c) < T) continue;
        const Polyline seg = geodesic(space, x, c);
        const SpacePoint e = seg.at(space, T);
        if (prev && distance(space, e, *prev) < tol.ray_endpoint) return seg.truncated(T);
        prev = e;
    }
    std::ostringstream os;
    os << "ray endpoints did not settle below " << tol.ray_endpoint << " before t = " << tol.ray_cap;
    throw GeometryError(ErrorKind::ray_not_converged, os.str());
}

SpacePoint AsymptoticRay::at(const ModelSpace& space, double t) const {
    if (t <= prefix_length && !prefix.empty()) {
        bool inside = false;
        const SpacePoint p = walk(space, prefix, std::max(0.0, t), inside);
        if (inside) return p;
    }
    return to_point(space, tail_sheet, anchor + std::max(0.0, t - prefix_length) * dir);
}

Polyline AsymptoticRay::polyline(double T) const {
    Polyline out;
    out.legs = prefix;
    out.total_length = prefix_length;
    out = out.truncated(T);
    if (T > prefix_length) {
        const double rest = T - prefix_length;
        out.legs.push_back({tail_sheet, anchor, anchor + rest * dir, rest});
        out.total_length = T;
    }
    return out;
}

AsymptoticRay asymptotic_ray(const ModelSpace& space, const SpacePoint& x, const IdealPoint& xi) {
    const auto xp = presentations(space, x);
    const auto dp = ideal_presentations(space, xi);

    AsymptoticRay r;
    r.origin = canonicalize(space, x);
    r.target = canonicalize(space, xi);

    bool have = false;
    for (const auto& a : xp) {
        for (const auto& b : dp) {
            if (a.sheet != b.sheet) continue;
            const Vec2 w = space.sheet(b.sheet).gradient(b.local);
            const double h = -dot(w, a.local);
            if (!have || h < r.busemann) {
                r.kind = RouteKind::direct;
                r.tail_sheet = b.sheet;
                r.anchor = a.local;
                r.dir = b.local;
                r.busemann = h;
                have = true;
            }
        }
    }
    if (have) return r;

    // Not sharing a sheet (fans only): one seam, or the apex.  Ties go to the seam.
    const Presentation& x0 = xp.front();
    const double c = seam_gauge(space);
    bool have_seam = false;
    double best_s = 0.0;
    Presentation best_a = x0;
    for (int m = 0; m < space.sheet_count(); ++m) {
        const int lo = m, hi = space.next(m);
        for (const auto& a : xp) {
            for (const auto& b : dp) {
                if (!((a.sheet == lo && b.sheet == hi) || (a.sheet == hi && b.sheet == lo))) continue;
                const NormGauge& ga = space.sheet(a.sheet);
                const double sa = seam_sign(space, m, a.sheet);
                const double sb = seam_sign(space, m, b.sheet);
                const double wx = space.sheet(b.sheet).gradient(b.local).x;
                auto f = [&](double s) { return ga.norm({a.local.x - sa * s, a.local.y}) - sb * s * wx; };
                auto df = [&](double s) { return leg_slope(ga, a.local, sa, s) - sb * wx; };
                Minimum mn;
                if (same_gauge(ga, space.sheet(b.sheet)) && b.local.y > 0.0) {
                    // ray from a along -b.local in a's frame
                    mn = straight_crossing(a.local.x - a.local.y / b.local.y * b.local.x, sa, f);
                } else {
                    mn = minimize_convex_halfline(f, df, 0.0, 2.0 * (ga.norm(a.local) / c + 1.0));
                }
                if (!have_seam || mn.value < r.busemann - 1e-13 * (1.0 + std::fabs(r.busemann))) {
                    r.kind = RouteKind::seam;
                    r.seam = m;
                    r.busemann = mn.value;
                    r.tail_sheet = b.sheet;
                    r.dir = b.local;
                    r.anchor = {sb * mn.arg, 0.0};
                    best_s = mn.arg;
                    best_a = a;
                    have_seam = true;
                }
            }
        }
    }
    const double via_apex = space.sheet(x0.sheet).norm(x0.local);
    if (!have_seam || via_apex < r.busemann - 1e-13 * (1.0 + std::fabs(r.busemann))) {
        r.kind = RouteKind::apex;
        r.seam = -1;
        r.busemann = via_apex;
        r.tail_sheet = dp.front().sheet;
        r.dir = dp.front().local;
        r.anchor = {0.0, 0.0};
        push_leg(r.prefix, space, x0.sheet, x0.local, {0.0, 0.0});
    } else {
        const double sa = seam_sign(space, r.seam, best_a.sheet);
        push_leg(r.prefix, space, best_a.sheet, best_a.local, {sa * best_s, 0.0});
    }
    r.prefix_length = legs_length(r.prefix);
    return r;
}

LinePath::LinePath(const ModelSpace& space, const LineCertificate& line)
    : plus(asymptotic_ray(space, line.through_point, line.end_plus)),
      minus(asymptotic_ray(space, line.through_point, line.end_minus)) {}

SpacePoint LinePath::at(const ModelSpace& space, double t) const {
    return t >= 0.0 ? plus.at(space, t) : minus.at(space, -t);
}

double distance_to_line(const ModelSpace& space, const LinePath& line, const SpacePoint& p) {
    const double R = 2.0 * distance(space, p, line.plus.origin) + 1.0;
    auto f = [&](double t) { return distance(space, p, line.at(space, t)); };
    return golden_section(f, -R, R, 1e-13).value;
}

SpacePoint line_point(const ModelSpace& space, const LineCertificate& line, double t) {
    if (t >= 0.0) return asymptotic_ray(space, line.through_point, line.end_plus).at(space, t);
    return asymptotic_ray(space, line.through_point, line.end_minus).at(space, -t);
}

LineCertificate is_line(const ModelSpace& space, const SpacePoint& m, const IdealPoint& xi,
                        const IdealPoint& eta, double T, double tol) {
    if (!(T > 0.0) || !(tol > 0.0)) {
        throw GeometryError(ErrorKind::invalid_argument, "is_line needs T > 0 and tol > 0");
    }
    LineCertificate c;
    c.through_point = canonicalize(space, m);
    c.end_plus = canonicalize(space, xi);
    c.end_minus = canonicalize(space, eta);
    c.horizon_T = T;
    c.residual = residual_at(space, c.through_point, c.end_plus, c.end_minus, T);
    c.granted = c.residual <= tol;
    return c;
}

LineSearchResult find_connecting_line(const ModelSpace& space, const IdealPoint& xi,
                                      const IdealPoint& eta, const LineSearchConfig& config) {
    const double T = config.horizon;
    LineSearchResult out;
    bool have = false;
    auto consider = [&](const SpacePoint& m) {
        LineCertificate c = is_line(space, m, xi, eta, T, config.tol);
        if (!have || c.residual < out.best.residual) {
            out.best = c;
            have = true;
        }
    };
    consider(apex(space));
    if (space.is_fan()) {
        for (int m = 0; m < space.sheet_count(); ++m) {
            auto res = [&](double s) {
                return residual_at(space, SpacePoint{m, s, 0.0}, xi, eta, T);
            };
            const Minimum mn = golden_section(res, 0.0, config.seam_range, 1e-10);
            if (mn.arg > 0.0) consider(SpacePoint{m, mn.arg, 0.0});
        }
        const auto px = ideal_presentations(space, xi);
        const auto pe = ideal_presentations(space, eta);
        for (const auto& a : px) {
            for (const auto& b : pe) {
                if (a.sheet == b.sheet) consider(SpacePoint{a.sheet, 0.0, 1.0});
            }
        }
    }
    out.found = out.best.residual <= config.tol;
    out.best.granted = out.found;
    return out;
}

StripReport verify_normed_strip(const ModelSpace& space, const LineCertificate& a,
                                const LineCertificate& b, int sample_n, double extent,
                                std::uint64_t seed) {
    if (sample_n < 1) throw GeometryError(ErrorKind::invalid_argument, "sample_n must be positive");
    const LinePath la(space, a), lb(space, b);

    StripReport rep;
    rep.width = distance(space, la.at(space, 0.0), lb.at(space, 0.0));
    double lo = rep.width, hi = rep.width;
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
        for (double sg : {-1.0, 1.0}) {
            const double d = distance(space, la.at(space, sg * t), lb.at(space, sg * t));
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    rep.parallel_spread = hi - lo;
    if (rep.parallel_spread > 1e-6 * (1.0 + rep.width)) {
        std::ostringstream os;
        os << "lines are not parallel: d(a(t), b(t)) varies by " << rep.parallel_spread;
        throw GeometryError(ErrorKind::non_parallel, os.str());
    }

    const SpacePoint a0 = la.at(space, 0.0);
    // Strip model norm N(x e + y w): e = unit direction of a, w = b(0) - a(0).
    auto model_norm = [&](double x, double y) {
        if (y == 0.0) return std::fabs(x);
        if (y < 0.0) {
            x = -x;
            y = -y;
        }
        return y * distance(space, a0, lb.at(space, x / y));
    };
    auto point = [&](double x, double y) {
        const SpacePoint pa = la.at(space, x), pb = lb.at(space, x);
        if (y <= 0.0 || same_point(space, pa, pb)) return pa;
        const Polyline g = geodesic(space, pa, pb);
        return g.at(space, y * g.total_length);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-extent, extent), uy(0.0, 1.0);
    for (int i = 0; i < sample_n * sample_n; ++i) {
        const double x1 = ux(rng), x2 = ux(rng);
        double y1 = uy(rng), y2 = uy(rng);
        // Put a share of the samples exactly on the two boundary lines.
        if (i % 4 == 0) y1 = 0.0;
        if (i % 4 == 1) y2 = 1.0;
        const double dx = distance(space, point(x1, y1), point(x2, y2));
        const double dm = model_norm(x2 - x1, y2 - y1);
        rep.max_discrepancy = std::max(rep.max_discrepancy, std::fabs(dx - dm));
        ++rep.pairs;
    }
    return rep;
}

double cone_chord(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta, double K) {
    return distance(space, point_on_apex_ray(space, xi, K), point_on_apex_ray(space, eta, K));
}

bool in_cone_neighborhood(const ModelSpace& space, const ConeNeighborhood& u, const IdealPoint& eta) {
    return cone_chord(space, u.center, eta, u.K) < 1.0;
}

SpacePoint sphere_point(const ModelSpace& space, const SpacePoint& center, double R, double theta) {
    const IdealPoint dir = ideal_from_cone_angle(space, theta);
    if (!space.is_fan()) {
        const Vec2 u = direction_vector(space, dir);
        return SpacePoint{0, center.x1 + R * u.x, center.x2 + R * u.y};
    }
    if (is_apex(space, center)) return point_on_apex_ray(space, dir, R);
    const double r0 = radius(space, center);
    if (!(R > r0)) throw GeometryError(ErrorKind::invalid_argument, "sphere must enclose the apex");
    // d(center, apex ray point) is convex in r, equal to r0 < R at r = 0
    double lo = 0.0, hi = R + r0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (distance(space, center, point_on_apex_ray(space, dir, mid)) < R) lo = mid; else hi = mid;
    }
    return point_on_apex_ray(space, dir, 0.5 * (lo + hi));
}

}  // namespace busemann
