#include "busemann/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace busemann {

namespace {

bool shares_sheet(const ModelSpace& space, const SpacePoint& x, const IdealPoint& xi,
                  Presentation* px = nullptr, Presentation* pxi = nullptr) {
    for (const auto& a : presentations(space, x)) {
        for (const auto& b : ideal_presentations(space, xi)) {
            if (a.sheet == b.sheet) {
                if (px) *px = a;
                if (pxi) *pxi = b;
                return true;
            }
        }
    }
    return false;
}

}  // namespace

double busemann_value(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x) {
    return asymptotic_ray(space, x, f.center).busemann + f.offset;
}

BusemannEval busemann_eval(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x) {
    BusemannEval out;
    Presentation px{0, {}}, pc{0, {}};
    if (shares_sheet(space, x, f.center, &px, &pc)) {
        const Vec2 w = space.sheet(pc.sheet).gradient(pc.local);
        out.value = -dot(w, px.local) + f.offset;
        out.closed_form = true;
        return out;
    }
    // d(c(t), x) - t is nonincreasing; early flat stretches (route through the apex) are
    // not accepted as convergence before t is large compared with |x|.
    const double t_min = 1e3 * (1.0 + radius(space, x));
    const double cap = 1073741824.0;
    double prev = 0.0, dec = 0.0, t = 1.0, noise = 0.0;
    bool first = true, converged = false;
    for (; t <= cap; t *= 2.0) {
        const double b = distance(space, point_on_apex_ray(space, f.center, t), x) - t;
        // d - t cancels about log2(t) bits
        noise = 16.0 * std::numeric_limits<double>::epsilon() * (t + radius(space, x));
        ++out.steps;
        if (!first) {
            dec = prev - b;
            if (dec < -1e-9 * (1.0 + std::fabs(prev)) - noise) out.monotone = false;
            if (t >= t_min && dec < std::max(1e-8, 4.0 * noise)) {
                prev = b;
                converged = true;
                break;
            }
        }
        prev = b;
        first = false;
    }
    const double last = prev;
    Bracket br;
    br.hi = last + f.offset + noise;
    br.lo = last - 2.0 * std::max(dec, 0.0) - noise + f.offset;
    br.horizon = std::min(t, cap);
    br.converged = converged;
    out.value = last + f.offset;
    out.bracket = br;
    return out;
}

double homogeneous_slope(const ModelSpace& space, const BusemannFunction& f, const IdealPoint& xi) {
    return asymptotic_ray(space, point_on_apex_ray(space, xi, 1.0), f.center).busemann;
}

Bracket asymptotic_slope(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x,
                         const IdealPoint& xi, SlopeTrace* trace) {
    const AsymptoticRay r = asymptotic_ray(space, x, xi);
    const double f0 = busemann_value(space, f, x);
    const double exact = homogeneous_slope(space, f, xi);
    const double t_min = 64.0 * (1.0 + r.prefix_length + std::hypot(r.anchor.x, r.anchor.y));
    const double cap = 1073741824.0;

    Bracket br;
    double prev = -2.0, t = 1.0, q = -1.0;
    bool first = true;
    for (; t <= cap; t *= 2.0) {
        q = (busemann_value(space, f, r.at(space, t)) - f0) / t;
        if (trace) {
            trace->t.push_back(t);
            trace->quotient.push_back(q);
            if (!first && q < prev - 1e-9) trace->monotone = false;
        }
        if (!first && t >= t_min && std::fabs(q - prev) < 1e-7) {
            br.converged = true;
            break;
        }
        prev = q;
        first = false;
    }
    br.horizon = std::min(t, cap);
    br.hi = std::min(1.0, exact);
    br.lo = std::clamp(q, -1.0, 1.0);
    if (br.lo > br.hi) br.lo = br.hi;
    return br;
}

std::optional<double> same_sheet_delta(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta) {
    std::optional<double> best;
    for (const auto& a : ideal_presentations(space, xi)) {
        for (const auto& b : ideal_presentations(space, eta)) {
            if (a.sheet != b.sheet) continue;
            const double d = 0.5 * space.sheet(a.sheet).norm(a.local - b.local);
            if (!best || d < *best) best = d;
        }
    }
    return best;
}

bool through_apex(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta) {
    if (!space.is_fan() || same_sheet_delta(space, xi, eta)) return false;
    const auto px = ideal_presentations(space, xi);
    const auto pe = ideal_presentations(space, eta);
    for (int m = 0; m < space.sheet_count(); ++m) {
        const int lo = m, hi = space.next(m);
        for (const auto& a : px) {
            for (const auto& b : pe) {
                if (!((a.sheet == lo && b.sheet == hi) || (a.sheet == hi && b.sheet == lo))) continue;
                const double sa = a.sheet == lo ? 1.0 : -1.0;
                const double sb = b.sheet == lo ? 1.0 : -1.0;
                // one-sided derivative at s = 0 of g_a(u - sa*s e1) + g_b(v - sb*s e1)
                const double d = -sa * space.sheet(a.sheet).gradient(a.local).x -
                                 sb * space.sheet(b.sheet).gradient(b.local).x;
                if (d < -1e-14) return false;
            }
        }
    }
    return true;
}

DeltaEstimate delta_infinity(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta,
                             const SpacePoint& o, const DeltaOptions& opt) {
    DeltaEstimate est;
    est.xi = canonicalize(space, xi);
    est.eta = canonicalize(space, eta);
    est.basepoint = canonicalize(space, o);
    if (auto d = same_sheet_delta(space, xi, eta)) {
        est.certificate = DeltaCertificate::same_sheet_closed_form;
        est.exact_value = *d;
    } else if (through_apex(space, xi, eta)) {
        est.certificate = DeltaCertificate::through_apex_exact;
        est.exact_value = 1.0;
    }

    const AsymptoticRay c = asymptotic_ray(space, o, xi);
    const AsymptoticRay d = asymptotic_ray(space, o, eta);
    const double r0 = radius(space, o);
    double t = 1.0, delta = 0.0;
    for (int i = 0;; ++i, t *= 2.0) {
        delta = distance(space, c.at(space, t), d.at(space, t)) / (2.0 * t);
        if (!est.trace.empty() && delta < est.trace.back() - 1e-9) est.monotone = false;
        est.trace.push_back(delta);
        const bool wide_enough = i + 1 >= opt.min_samples;
        if ((wide_enough && r0 / t <= opt.width_target) || t * 2.0 > opt.cap) break;
    }
    est.bracket.horizon = t;
    est.bracket.hi = std::min(1.0, delta + r0 / t);
    est.bracket.lo = std::min(delta, est.bracket.hi);
    est.bracket.converged = r0 / t <= opt.width_target;
    return est;
}

BasepointReport basepoint_invariance_check(const ModelSpace& space, const IdealPoint& xi,
                                           const IdealPoint& eta, const SpacePoint& o,
                                           const SpacePoint& o2) {
    BasepointReport rep;
    // Both traces run to the same horizon 2^20.
    DeltaOptions fixed;
    fixed.min_samples = 21;
    fixed.width_target = 0.0;
    fixed.cap = std::ldexp(1.0, 20);
    rep.at_o = delta_infinity(space, xi, eta, o, fixed);
    rep.at_o2 = delta_infinity(space, xi, eta, o2, fixed);
    rep.horizon = rep.at_o.bracket.horizon;
    rep.difference = std::fabs(rep.at_o.bracket.mid() - rep.at_o2.bracket.mid());
    rep.bound = 2.0 * distance(space, o, o2) / rep.horizon + rep.at_o.bracket.width() +
                rep.at_o2.bracket.width();
    rep.ok = rep.difference <= rep.bound + 1e-12;
    return rep;
}

std::pair<double, double> cone_reach(const ModelSpace& space, const IdealPoint& xi, double K) {
    const double theta0 = cone_angle(space, xi);
    const double half = 0.5 * space.cone_angle_total();
    auto chord = [&](double delta) {
        return cone_chord(space, xi, ideal_from_cone_angle(space, theta0 + delta), K);
    };
    auto reach = [&](double sign) {
        double in = 0.0, out = std::min(1.0 / K, half);
        while (chord(sign * out) < 1.0) {
            in = out;
            if (out >= half) return half;
            out = std::min(2.0 * out, half);
        }
        for (int i = 0; i < 80; ++i) {
            const double m = 0.5 * (in + out);
            if (m <= in || m >= out) break;
            if (chord(sign * m) < 1.0) in = m; else out = m;
        }
        return in;
    };
    return {reach(-1.0), reach(1.0)};
}

std::vector<IdealPoint> cone_neighborhood_sample(const ModelSpace& space, const IdealPoint& xi,
                                                 double K, int n, std::uint64_t seed) {
    if (!(K > 0.0) || n < 1) throw GeometryError(ErrorKind::invalid_argument, "need K > 0 and n >= 1");
    const IdealPoint c = canonicalize(space, xi);
    std::vector<IdealPoint> out{c};
    if (n == 1) return out;
    const auto [down, up] = cone_reach(space, c, K);
    const double theta0 = cone_angle(space, c);
    const int per_side = n / 2;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 1.0);
    for (int j = 1; j < n; ++j) {
        const bool plus = (j % 2) == 1;
        const int idx = (j - 1) / 2;
        const double reach = plus ? up : down;
        // stratified in (0, 1): the last stratum reaches the edge of the neighbourhood
        double frac = (idx + jitter(rng)) / std::max(per_side, 1);
        frac = std::min(frac, 1.0) * 0.999;
        double delta = frac * reach;
        IdealPoint eta = ideal_from_cone_angle(space, theta0 + (plus ? delta : -delta));
        for (int tries = 0; tries < 60 && cone_chord(space, c, eta, K) >= 1.0; ++tries) {
            delta *= 0.5;
            eta = ideal_from_cone_angle(space, theta0 + (plus ? delta : -delta));
        }
        out.push_back(eta);
    }
    return out;
}

}  // namespace busemann
