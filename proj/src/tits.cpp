#include "busemann/tits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "busemann/minimize.hpp"

namespace busemann {

const char* to_string(Relation r) {
    switch (r) {
        case Relation::lt_pi: return "lt_pi";
        case Relation::le_pi: return "le_pi";
        case Relation::ge_pi: return "ge_pi";
        case Relation::gt_pi: return "gt_pi";
        case Relation::eq_pi: return "eq_pi";
        case Relation::lt_half: return "lt_half";
        case Relation::le_half: return "le_half";
        case Relation::ge_half: return "ge_half";
        case Relation::gt_half: return "gt_half";
        case Relation::eq_half: return "eq_half";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::holds: return "holds";
        case Outcome::fails: return "fails";
        case Outcome::undetermined: return "undetermined";
    }
    return "?";
}

const char* to_string(CertificateKind c) { return c == CertificateKind::exact ? "exact" : "numeric"; }

const char* to_string(DeltaCertificate c) {
    switch (c) {
        case DeltaCertificate::none: return "none";
        case DeltaCertificate::same_sheet_closed_form: return "same-sheet-closed-form";
        case DeltaCertificate::through_apex_exact: return "through-apex-exact";
    }
    return "?";
}

const char* to_string(QuasiStatus s) {
    switch (s) {
        case QuasiStatus::certified: return "certified";
        case QuasiStatus::falsified: return "falsified";
        case QuasiStatus::undetermined: return "undetermined";
    }
    return "?";
}

const char* to_string(Side s) {
    switch (s) {
        case Side::any: return "any";
        case Side::eta_to_xi: return "eta_to_xi";
        case Side::xi_to_eta: return "xi_to_eta";
    }
    return "?";
}

const char* to_string(TriangleMode m) {
    switch (m) {
        case TriangleMode::horofunction_two_points: return "horofunction_two_points";
        case TriangleMode::two_horofunctions_one_point: return "two_horofunctions_one_point";
        case TriangleMode::chained: return "chained";
    }
    return "?";
}

std::optional<Relation> relation_from_string(const std::string& s) {
    for (Relation r : {Relation::lt_pi, Relation::le_pi, Relation::ge_pi, Relation::gt_pi, Relation::eq_pi,
                       Relation::lt_half, Relation::le_half, Relation::ge_half, Relation::gt_half,
                       Relation::eq_half}) {
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

Outcome negate(Outcome o) {
    if (o == Outcome::holds) return Outcome::fails;
    if (o == Outcome::fails) return Outcome::holds;
    return Outcome::undetermined;
}

Outcome conjunction(Outcome a, Outcome b) {
    if (a == Outcome::fails || b == Outcome::fails) return Outcome::fails;
    if (a == Outcome::holds && b == Outcome::holds) return Outcome::holds;
    return Outcome::undetermined;
}

namespace {

constexpr double pi = 3.14159265358979323846;

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sample seed tied to the ideal point, so td_pi(a, b) and td_pi(b, a) see the same sets.
std::uint64_t point_seed(std::uint64_t seed, const ModelSpace& space, const IdealPoint& xi) {
    const IdealPoint c = canonicalize(space, xi);
    return splitmix(seed ^ std::bit_cast<std::uint64_t>(c.phi) ^ (static_cast<std::uint64_t>(c.sheet) << 56));
}

struct LtPi {
    Outcome outcome = Outcome::undetermined;
    CertificateKind certificate = CertificateKind::numeric;
    double margin = 0.0;
    DeltaEstimate estimate;
};

LtPi decide_lt_pi(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta) {
    LtPi out;
    out.estimate = delta_infinity(space, xi, eta, apex(space));
    const DeltaEstimate& e = out.estimate;
    switch (e.certificate) {
        case DeltaCertificate::same_sheet_closed_form:
            out.certificate = CertificateKind::exact;
            out.outcome = e.exact_value <= 1.0 - kClosedFormGuard ? Outcome::holds : Outcome::fails;
            out.margin = 1.0 - e.exact_value;
            return out;
        case DeltaCertificate::through_apex_exact:
            out.certificate = CertificateKind::exact;
            out.outcome = Outcome::fails;
            out.margin = 0.0;
            return out;
        case DeltaCertificate::none:
            break;
    }
    out.margin = 1.0 - e.bracket.hi;
    if (e.bracket.hi < 1.0 - kDeltaMargin) out.outcome = Outcome::holds;
    else if (e.bracket.lo > 1.0 - kDeltaFailSlack) out.outcome = Outcome::fails;
    return out;
}

bool exact_delta_one(const ModelSpace& space, const IdealPoint& a, const IdealPoint& b) {
    if (through_apex(space, a, b)) return true;
    const auto d = same_sheet_delta(space, a, b);
    return d && *d > 1.0 - kClosedFormGuard;
}

TitsVerdict decide_le_pi(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta,
                         const Resolution& res) {
    TitsVerdict v;
    v.relation = Relation::le_pi;
    v.samples = res.samples;
    v.horizon = res.horizon;
    v.K_max = res.K_schedule.empty() ? 0.0 : *std::max_element(res.K_schedule.begin(), res.K_schedule.end());

    const LtPi center = decide_lt_pi(space, xi, eta);
    v.delta = center.estimate;
    if (center.outcome == Outcome::holds) {
        // (xi, eta) itself lies in every neighbourhood pair.
        for (double K : res.K_schedule) {
            NeighborhoodProbe p;
            p.K = K;
            p.pairs_checked = 1;
            p.witness_found = true;
            p.witness_xi = canonicalize(space, xi);
            p.witness_eta = canonicalize(space, eta);
            p.witness_delta = center.estimate.bracket.hi;
            v.probes.push_back(p);
        }
        v.outcome = Outcome::holds;
        v.certificate = center.certificate;
        v.margin = center.margin;
        return v;
    }

    bool all_found = true, any_obstruction = false, all_exact = true;
    double margin = 1.0;
    for (double K : res.K_schedule) {
        NeighborhoodProbe p;
        p.K = K;
        const auto sx = cone_neighborhood_sample(space, xi, K, res.samples, point_seed(res.seed, space, xi));
        const auto se = cone_neighborhood_sample(space, eta, K, res.samples, point_seed(res.seed, space, eta));
        bool all_certified = true;
        for (const auto& a : sx) {
            for (const auto& b : se) {
                ++p.pairs_checked;
                if (exact_delta_one(space, a, b)) {
                    ++p.certified_pairs;
                    continue;
                }
                all_certified = false;
                const LtPi d = decide_lt_pi(space, a, b);
                if (d.outcome == Outcome::holds) {
                    p.witness_found = true;
                    p.witness_xi = a;
                    p.witness_eta = b;
                    p.witness_delta = d.estimate.bracket.hi;
                    margin = std::min(margin, d.margin);
                    if (d.certificate != CertificateKind::exact) all_exact = false;
                    break;
                }
            }
            if (p.witness_found) break;
        }
        p.obstruction = !p.witness_found && all_certified;
        all_found = all_found && p.witness_found;
        any_obstruction = any_obstruction || p.obstruction;
        v.probes.push_back(p);
    }
    if (any_obstruction) {
        v.outcome = Outcome::fails;
        v.certificate = CertificateKind::exact;
        v.margin = 0.0;
    } else if (all_found) {
        v.outcome = Outcome::holds;
        v.certificate = all_exact ? CertificateKind::exact : CertificateKind::numeric;
        v.margin = margin;
    } else {
        v.outcome = Outcome::undetermined;
    }
    return v;
}

}  // namespace

TitsVerdict td_pi(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta, Relation relation,
                  const Resolution& res) {
    auto lt = [&] {
        TitsVerdict v;
        const LtPi d = decide_lt_pi(space, xi, eta);
        v.relation = Relation::lt_pi;
        v.outcome = d.outcome;
        v.certificate = d.certificate;
        v.margin = d.margin;
        v.delta = d.estimate;
        v.horizon = d.estimate.bracket.horizon;
        return v;
    };
    TitsVerdict v;
    switch (relation) {
        case Relation::lt_pi:
            return lt();
        case Relation::le_pi:
            return decide_le_pi(space, xi, eta, res);
        case Relation::ge_pi:
            v = lt();
            v.outcome = negate(v.outcome);
            break;
        case Relation::gt_pi:
            v = decide_le_pi(space, xi, eta, res);
            v.outcome = negate(v.outcome);
            break;
        case Relation::eq_pi: {
            const TitsVerdict ge = td_pi(space, xi, eta, Relation::ge_pi, res);
            v = decide_le_pi(space, xi, eta, res);
            v.outcome = conjunction(ge.outcome, v.outcome);
            v.margin = std::min(ge.margin, v.margin);
            if (ge.certificate == CertificateKind::numeric) v.certificate = CertificateKind::numeric;
            break;
        }
        default:
            throw GeometryError(ErrorKind::invalid_argument, "td_pi takes a pi relation");
    }
    v.relation = relation;
    return v;
}

TitsVerdict td_half_pi(const ModelSpace& space, const BusemannFunction& f, const IdealPoint& xi,
                       Relation relation, const Resolution& res) {
    const Bracket s = asymptotic_slope(space, f, apex(space), xi);
    const double b = kSlopeBand;
    TitsVerdict v;
    v.relation = relation;
    v.slope = s;
    v.samples = 1;
    v.horizon = s.horizon;
    (void)res;
    bool shares = false;
    for (const auto& a : ideal_presentations(space, f.center))
        for (const auto& c : ideal_presentations(space, xi)) shares = shares || a.sheet == c.sheet;
    v.certificate = shares ? CertificateKind::exact : CertificateKind::numeric;

    auto le = [&]() -> std::pair<Outcome, double> {
        if (s.hi <= b) return {Outcome::holds, b - s.hi};
        if (s.lo > b) return {Outcome::fails, s.lo - b};
        return {Outcome::undetermined, 0.0};
    };
    auto lt = [&]() -> std::pair<Outcome, double> {
        if (s.hi < -b) return {Outcome::holds, -b - s.hi};
        if (s.lo >= -b) return {Outcome::fails, s.lo + b};
        return {Outcome::undetermined, 0.0};
    };
    std::pair<Outcome, double> r;
    switch (relation) {
        case Relation::le_half: r = le(); break;
        case Relation::lt_half: r = lt(); break;
        case Relation::gt_half: r = le(); r.first = negate(r.first); break;
        case Relation::ge_half: r = lt(); r.first = negate(r.first); break;
        case Relation::eq_half: {
            const auto a = le(), c = lt();
            r.first = conjunction(a.first, negate(c.first));
            r.second = std::min(a.second, c.second);
            break;
        }
        default:
            throw GeometryError(ErrorKind::invalid_argument, "td_half_pi takes a half-pi relation");
    }
    v.outcome = r.first;
    v.margin = r.second;
    return v;
}

QuasiCert certify_quasigeodesic(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta,
                                const SpacePoint& o, double epsilon, double horizon) {
    if (!(epsilon >= 0.0) || !(horizon > 0.0)) {
        throw GeometryError(ErrorKind::invalid_argument, "need epsilon >= 0 and horizon > 0");
    }
    QuasiCert q;
    q.epsilon = epsilon;
    q.delta = delta_infinity(space, xi, eta, o);
    const double threshold = 1.0 / (1.0 + epsilon);
    const double eps1 = epsilon / (2.0 + epsilon);  // (1 - eps1)/(1 + eps1) = 1/(1 + eps)
    const double needed = 1.0 / (1.0 + eps1);
    const AsymptoticRay c = asymptotic_ray(space, o, xi);
    const AsymptoticRay d = asymptotic_ray(space, o, eta);

    const Bracket& br = q.delta.bracket;
    const bool delta_one = q.delta.certificate == DeltaCertificate::through_apex_exact ||
                           (q.delta.certificate == DeltaCertificate::same_sheet_closed_form &&
                            q.delta.exact_value > 1.0 - kClosedFormGuard);
    if (br.hi < threshold - 1e-6 && !delta_one) {
        q.status = QuasiStatus::falsified;
        const double t = horizon;
        q.falsification = QuasiWitness{t, t, distance(space, c.at(space, t), d.at(space, t))};
        return q;
    }
    if (!(delta_one || br.lo > needed)) {
        q.status = QuasiStatus::undetermined;
        return q;
    }

    std::vector<double> grid{0.0};
    for (int j = 0; j <= 40; ++j) {
        const double v = horizon * std::ldexp(1.0, -j);
        if (v < 1e-3) break;
        grid.push_back(v);
    }
    for (int i = 1; i < 16; ++i) grid.push_back(horizon * i / 16.0);
    double need = 0.0;
    for (double s : grid) {
        const SpacePoint ps = d.at(space, s);
        for (double t : grid) {
            const double D = distance(space, ps, c.at(space, t));
            q.max_upper_excess = std::max(q.max_upper_excess, D - (s + t));
            need = std::max(need, (s + t) / (1.0 + epsilon) - D);
            ++q.pairs;
        }
    }
    if (q.max_upper_excess > 1e-9 * (1.0 + 2.0 * horizon)) {
        throw GeometryError(ErrorKind::invalid_argument, "triangle inequality violated along the concatenated rays");
    }
    constexpr double step = 1e-9;
    q.b = need <= 0.0 ? 0.0 : std::ceil(need / step) * step;
    q.status = QuasiStatus::certified;
    return q;
}

ParabolaWitness parabola_gap(double alpha, double b) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw GeometryError(ErrorKind::invalid_argument, "alpha must lie in (1, 2)");
    if (!(b >= 0.0) || !std::isfinite(b)) throw GeometryError(ErrorKind::invalid_argument, "b must be >= 0");
    auto f = [&](double x) { return std::pow(x, 2.0 - alpha) * (std::pow(x, 2.0 * (alpha - 1.0) / alpha) - 2.0 * b); };
    ParabolaWitness w{alpha, b, 1.0, 0.0, 0.0, 0.0};
    auto fill = [&] {
        w.y0 = std::pow(w.x0, 2.0 / alpha);
        w.chord = 2.0 * w.y0;
        w.path_length = 2.0 * std::hypot(w.x0, w.y0);
    };
    for (int i = 0; i < 2000 && !(f(w.x0) > b * b); ++i) w.x0 *= 2.0;
    fill();
    for (int i = 0; i < 2000 && !(w.gap() > b); ++i) {
        w.x0 *= 2.0;
        fill();
    }
    if (!(w.gap() > b)) throw GeometryError(ErrorKind::invalid_argument, "no parabola witness found");
    return w;
}

namespace {

double wrap_angle(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0) r += period;
    return r;
}

SemiplaneModel detect_side(const ModelSpace& space, const LineCertificate& line, const std::vector<double>& Ks,
                           Side side, const SemiplaneConfig& cfg) {
    SemiplaneModel model;
    model.side = side;
    model.boundary = line;
    const LinePath a(space, line);
    const SpacePoint m = line.through_point;
    const double total = space.cone_angle_total();
    const double th_plus = cone_angle(space, line.end_plus);
    const double th_minus = cone_angle(space, line.end_minus);
    const double arc = wrap_angle(th_plus - th_minus, total);
    const double start = side == Side::eta_to_xi ? th_minus : th_plus;
    const double len = side == Side::eta_to_xi ? arc : total - arc;

    auto fail = [&](double K, const std::string& why) {
        model.found = false;
        model.obstruction = why;
        model.obstruction_K = K;
        return model;
    };
    if (!(len > 0.0)) return fail(0.0, "line ends coincide");

    BusemannFunction phi{line.end_plus, 0.0}, psi{line.end_minus, 0.0};
    phi.offset = -busemann_value(space, phi, m);
    psi.offset = -busemann_value(space, psi, m);
    auto F = [&](const SpacePoint& y) { return busemann_value(space, phi, y) + busemann_value(space, psi, y); };

    for (double K : Ks) {
        if (space.is_fan() && !is_apex(space, m) && radius(space, m) >= K) {
            return fail(K, "sphere about the line point does not enclose the apex");
        }
        const int N = cfg.grid;
        std::vector<double> th(N), fv(N);
        double fmin = 1e300;
        for (int i = 0; i < N; ++i) {
            th[i] = start + len * (i + 0.5) / N;
            fv[i] = F(sphere_point(space, m, K, th[i]));
            fmin = std::min(fmin, fv[i]);
        }
        const double ftol = 1e-9 * (1.0 + K);
        int best = -1;
        double best_d = -1.0;
        for (int i = 0; i < N; ++i) {
            if (fv[i] > fmin + ftol) continue;
            const double d = distance_to_line(space, a, sphere_point(space, m, K, th[i]));
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        // refine between the neighbouring grid angles, staying among minimizers of F
        const double lo = th[std::max(best - 1, 0)], hi = th[std::min(best + 1, N - 1)];
        auto objective = [&](double t) {
            const SpacePoint y = sphere_point(space, m, K, t);
            const double excess = std::max(0.0, F(y) - fmin - ftol);
            return -distance_to_line(space, a, y) + 1e3 * excess;
        };
        const Minimum ref = golden_section(objective, lo, hi, 1e-12);
        double theta = th[best];
        if (-ref.value > best_d) theta = ref.arg;
        StripAtK st;
        st.K = K;
        st.b_point = sphere_point(space, m, K, theta);
        st.distance_to_boundary = distance_to_line(space, a, st.b_point);
        if (model.strips.empty()) model.transversal = ideal_from_cone_angle(space, theta);
        if (std::fabs(st.distance_to_boundary - K) > cfg.discrepancy_tol * (1.0 + K)) {
            std::ostringstream os;
            os << "minimizers of the end Busemann sum on S(m," << K << ") reach only distance "
               << st.distance_to_boundary << " from the line";
            return fail(K, os.str());
        }
        st.parallel = is_line(space, st.b_point, line.end_plus, line.end_minus, cfg.line_horizon, cfg.line_tol);
        if (!st.parallel.granted) {
            std::ostringstream os;
            os << "no complement rays through b_K (residual " << st.parallel.residual << ")";
            return fail(K, os.str());
        }
        try {
            st.strip = verify_normed_strip(space, line, st.parallel, cfg.strip_samples, 2.0 * K + 10.0,
                                           static_cast<std::uint64_t>(K * 1000.0));
        } catch (const GeometryError& e) {
            return fail(K, e.what());
        }
        if (st.strip.max_discrepancy > cfg.discrepancy_tol) {
            std::ostringstream os;
            os << "strip discrepancy " << st.strip.max_discrepancy;
            return fail(K, os.str());
        }
        model.max_discrepancy = std::max(model.max_discrepancy, st.strip.max_discrepancy);
        model.strips.push_back(st);
    }
    for (size_t i = 0; i + 1 < model.strips.size(); ++i) {
        const LinePath outer(space, model.strips[i + 1].parallel);
        const StripAtK& in = model.strips[i];
        const double across = in.distance_to_boundary + distance_to_line(space, outer, in.b_point);
        model.strips[i].nest_error = std::fabs(across - model.strips[i + 1].distance_to_boundary);
    }
    model.found = true;
    return model;
}

}  // namespace

SemiplaneModel detect_normed_semiplane(const ModelSpace& space, const LineCertificate& line,
                                       const std::vector<double>& K_schedule, Side side,
                                       const SemiplaneConfig& config) {
    if (!line.granted) throw GeometryError(ErrorKind::invalid_argument, "semiplane detection needs a granted line");
    if (side != Side::any) return detect_side(space, line, K_schedule, side, config);
    SemiplaneModel a = detect_side(space, line, K_schedule, Side::eta_to_xi, config);
    SemiplaneModel b = detect_side(space, line, K_schedule, Side::xi_to_eta, config);
    if (a.found && b.found) {
        throw GeometryError(ErrorKind::invalid_argument, "both sides admit strips; a side must be specified");
    }
    if (b.found) return b;
    if (a.found) return a;
    a.obstruction = "eta_to_xi: " + a.obstruction + "; xi_to_eta: " + b.obstruction;
    return a;
}

TriangleReport triangle_check_pi_half(const ModelSpace& space, TriangleMode mode, const IdealPoint& a,
                                      const IdealPoint& b, const IdealPoint& c, const Resolution& res) {
    TriangleReport rep{mode, {}, {}, {}, false, false};
    switch (mode) {
        case TriangleMode::horofunction_two_points:
            rep.hypothesis_1 = td_half_pi(space, {a, 0.0}, b, Relation::le_half, res);
            rep.hypothesis_2 = td_half_pi(space, {a, 0.0}, c, Relation::le_half, res);
            break;
        case TriangleMode::two_horofunctions_one_point:
            rep.hypothesis_1 = td_half_pi(space, {a, 0.0}, c, Relation::le_half, res);
            rep.hypothesis_2 = td_half_pi(space, {b, 0.0}, c, Relation::le_half, res);
            break;
        case TriangleMode::chained:
            rep.hypothesis_1 = td_half_pi(space, {a, 0.0}, b, Relation::le_half, res);
            rep.hypothesis_2 = td_half_pi(space, {b, 0.0}, c, Relation::le_half, res);
            break;
    }
    rep.hypotheses_hold =
        rep.hypothesis_1.outcome == Outcome::holds && rep.hypothesis_2.outcome == Outcome::holds;
    const IdealPoint& p = mode == TriangleMode::horofunction_two_points ? b : a;
    const IdealPoint& q = mode == TriangleMode::two_horofunctions_one_point ? b : c;
    rep.conclusion = td_pi(space, p, q, Relation::le_pi, res);
    rep.counter_instance = rep.hypotheses_hold && rep.conclusion.outcome == Outcome::fails;
    return rep;
}

}  // namespace busemann
