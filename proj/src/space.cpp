#include "busemann/space.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace busemann {

namespace {

constexpr double pi = std::numbers::pi;

double pnorm(double a, double b, double p) {
    a = std::fabs(a);
    b = std::fabs(b);
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    if (p == 2.0) return std::hypot(a, b);
    const double ra = a / m, rb = b / m;
    return m * std::pow(std::pow(ra, p) + std::pow(rb, p), 1.0 / p);
}

double wrap(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

}  // namespace

NormGauge::NormGauge(double p, Mat2 A) : p_(p), A_(A) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        std::ostringstream os;
        os << "gauge exponent must satisfy p > 1 (got " << p << ")";
        throw GeometryError(ErrorKind::invalid_gauge, os.str());
    }
    const double det = A.det();
    if (!std::isfinite(det) || det == 0.0) {
        throw GeometryError(ErrorKind::invalid_gauge, "gauge matrix A is singular");
    }
}

double NormGauge::norm(Vec2 v) const {
    const Vec2 w = A_.apply(v);
    return pnorm(w.x, w.y, p_);
}

Vec2 NormGauge::gradient(Vec2 v) const {
    const Vec2 w = A_.apply(v);
    const double n = pnorm(w.x, w.y, p_);
    if (n == 0.0) throw GeometryError(ErrorKind::zero_vector, "gauge gradient at the zero vector");
    auto comp = [&](double wi) {
        if (wi == 0.0) return 0.0;
        const double r = std::fabs(wi) / n;
        return std::copysign(p_ == 2.0 ? r : std::pow(r, p_ - 1.0), wi);
    };
    return A_.apply_transpose({comp(w.x), comp(w.y)});
}

double gauge_norm(const NormGauge& g, Vec2 v) { return g.norm(v); }
Vec2 gauge_gradient(const NormGauge& g, Vec2 v) { return g.gradient(v); }

ModelSpace ModelSpace::full_plane(NormGauge g) {
    return ModelSpace(SpaceKind::full_plane, {g});
}

ModelSpace ModelSpace::fan(std::vector<NormGauge> sheets) {
    if (sheets.size() < 2) {
        throw GeometryError(ErrorKind::invalid_space, "a fan needs at least two sheets");
    }
    const size_t k = sheets.size();
    for (size_t i = 0; i < k; ++i) {
        const double a = sheets[i].norm({1.0, 0.0});
        const double b = sheets[(i + 1) % k].norm({1.0, 0.0});
        if (std::fabs(a - b) > 1e-12 * std::max(a, b)) {
            std::ostringstream os;
            os << "gluing mismatch: gauge of (1,0) is " << a << " on sheet " << i << " but " << b
               << " on sheet " << (i + 1) % k;
            throw GeometryError(ErrorKind::invalid_space, os.str());
        }
    }
    return ModelSpace(SpaceKind::fan, std::move(sheets));
}

double ModelSpace::cone_angle_total() const {
    return is_fan() ? pi * sheet_count() : 2.0 * pi;
}

SpacePoint canonicalize(const ModelSpace& space, SpacePoint p) {
    const int k = space.sheet_count();
    if (p.sheet < 0 || p.sheet >= k) {
        throw GeometryError(ErrorKind::point_outside_space, "sheet index out of range");
    }
    if (!std::isfinite(p.x1) || !std::isfinite(p.x2)) {
        throw GeometryError(ErrorKind::point_outside_space, "non-finite coordinates");
    }
    if (!space.is_fan()) return {0, p.x1 + 0.0, p.x2 + 0.0};
    if (p.x2 < 0.0) {
        throw GeometryError(ErrorKind::point_outside_space, "x2 < 0 in a fan sheet");
    }
    if (p.x2 == 0.0) {
        if (p.x1 == 0.0) return {0, 0.0, 0.0};
        if (p.x1 < 0.0) return {space.prev(p.sheet), -p.x1, 0.0};
        return {p.sheet, p.x1, 0.0};
    }
    return {p.sheet, p.x1 + 0.0, p.x2};
}

IdealPoint canonicalize(const ModelSpace& space, IdealPoint xi) {
    const int k = space.sheet_count();
    if (xi.sheet < 0 || xi.sheet >= k || !std::isfinite(xi.phi)) {
        throw GeometryError(ErrorKind::point_outside_space, "invalid ideal point");
    }
    if (!space.is_fan()) return {0, wrap(xi.phi, 2.0 * pi)};
    if (xi.phi < 0.0 || xi.phi > pi) {
        throw GeometryError(ErrorKind::point_outside_space, "fan ideal point needs phi in [0, pi]");
    }
    if (xi.phi == pi) return {space.prev(xi.sheet), 0.0};
    return {xi.sheet, xi.phi + 0.0};
}

bool same_point(const ModelSpace& space, const SpacePoint& a, const SpacePoint& b) {
    const SpacePoint ca = canonicalize(space, a), cb = canonicalize(space, b);
    return ca.sheet == cb.sheet && ca.x1 == cb.x1 && ca.x2 == cb.x2;
}

bool same_ideal(const ModelSpace& space, const IdealPoint& a, const IdealPoint& b) {
    const IdealPoint ca = canonicalize(space, a), cb = canonicalize(space, b);
    return ca.sheet == cb.sheet && ca.phi == cb.phi;
}

bool is_apex(const ModelSpace&, const SpacePoint& p) { return p.x1 == 0.0 && p.x2 == 0.0; }

SpacePoint apex(const ModelSpace&) { return {0, 0.0, 0.0}; }

std::vector<Presentation> presentations(const ModelSpace& space, const SpacePoint& p) {
    const SpacePoint c = canonicalize(space, p);
    if (!space.is_fan()) return {{0, c.local()}};
    if (c.x2 > 0.0) return {{c.sheet, c.local()}};
    if (c.x1 == 0.0) {
        std::vector<Presentation> out;
        for (int i = 0; i < space.sheet_count(); ++i) out.push_back({i, {0.0, 0.0}});
        return out;
    }
    return {{c.sheet, {c.x1, 0.0}}, {space.next(c.sheet), {-c.x1, 0.0}}};
}

Vec2 direction_vector(const ModelSpace& space, const IdealPoint& xi) {
    const IdealPoint c = canonicalize(space, xi);
    const Vec2 e{std::cos(c.phi), c.phi == 0.0 ? 0.0 : std::sin(c.phi)};
    const double n = space.sheet(c.sheet).norm(e);
    return (1.0 / n) * e;
}

std::vector<Presentation> ideal_presentations(const ModelSpace& space, const IdealPoint& xi) {
    const IdealPoint c = canonicalize(space, xi);
    std::vector<Presentation> out{{c.sheet, direction_vector(space, c)}};
    if (space.is_fan() && c.phi == 0.0) {
        const int j = space.next(c.sheet);
        const double n = space.sheet(j).norm({1.0, 0.0});
        out.push_back({j, {-1.0 / n, 0.0}});
    }
    return out;
}

double radius(const ModelSpace& space, const SpacePoint& p) {
    const SpacePoint c = canonicalize(space, p);
    return space.sheet(c.sheet).norm(c.local());
}

double cone_angle(const ModelSpace& space, const IdealPoint& xi) {
    const IdealPoint c = canonicalize(space, xi);
    if (!space.is_fan()) return c.phi;
    return wrap((c.sheet + 1) * pi - c.phi, space.cone_angle_total());
}

IdealPoint ideal_from_cone_angle(const ModelSpace& space, double theta) {
    const double t = wrap(theta, space.cone_angle_total());
    if (!space.is_fan()) return {0, t};
    int i = static_cast<int>(std::floor(t / pi));
    i = std::clamp(i, 0, space.sheet_count() - 1);
    double phi = (i + 1) * pi - t;
    phi = std::clamp(phi, 0.0, pi);
    return canonicalize(space, IdealPoint{i, phi});
}

SpacePoint point_on_apex_ray(const ModelSpace& space, const IdealPoint& xi, double r) {
    const IdealPoint c = canonicalize(space, xi);
    const Vec2 u = direction_vector(space, c);
    double x2 = r * u.y;
    if (space.is_fan() && x2 < 0.0) x2 = 0.0;
    return canonicalize(space, SpacePoint{c.sheet, r * u.x, x2});
}

}  // namespace busemann
