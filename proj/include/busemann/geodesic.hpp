#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "busemann/space.hpp"

namespace busemann {

struct Leg {
    int sheet;
    Vec2 start;
    Vec2 end;
    double length;
};

struct Polyline {
    std::vector<Leg> legs;
    double total_length = 0.0;

    // Point at arclength t, clamped to [0, total_length].
    SpacePoint at(const ModelSpace& space, double t) const;
    SpacePoint front(const ModelSpace& space) const { return at(space, 0.0); }
    SpacePoint back(const ModelSpace& space) const { return at(space, total_length); }
    Polyline truncated(double T) const;
};

enum class RouteKind { direct, seam, apex };

struct Route {
    RouteKind kind = RouteKind::apex;
    int seam = -1;          // seam index for RouteKind::seam
    double s = 0.0;         // crossing parameter (distance from the apex along the seam)
    double length = 0.0;
    Presentation from{0, {}};
    Presentation to{0, {}};
    Vec2 crossing_from{};   // crossing point in from.sheet coordinates
    Vec2 crossing_to{};     // same point in to.sheet coordinates
};

struct Tolerances {
    double distance_rel = 1e-9;
    double ray_endpoint = 1e-7;
    double line_residual = 1e-6;
    double ray_cap = 1073741824.0;  // 2^30
};

Route shortest_route(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q);
double distance(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q);
Polyline geodesic(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q);
Polyline route_polyline(const ModelSpace& space, const Route& r);
SpacePoint midpoint(const ModelSpace& space, const SpacePoint& p, const SpacePoint& q);

// Ray [x xi] as the limit of initial pieces of segments [x, c(t_n)], t_n = 1, 2, 4, ...
Polyline ray(const ModelSpace& space, const SpacePoint& x, const IdealPoint& xi, double T,
             const Tolerances& tol = {});

// The exact ray [x xi]: a prefix (at most one leg, ending on a seam or at the apex)
// followed by a straight tail in a sheet of xi.  `busemann` is beta_xi(x) with beta_xi(apex) = 0.
struct AsymptoticRay {
    SpacePoint origin;
    IdealPoint target;
    RouteKind kind = RouteKind::direct;
    int seam = -1;
    std::vector<Leg> prefix;
    double prefix_length = 0.0;
    int tail_sheet = 0;
    Vec2 anchor{};
    Vec2 dir{};
    double busemann = 0.0;

    SpacePoint at(const ModelSpace& space, double t) const;
    Polyline polyline(double T) const;
};

AsymptoticRay asymptotic_ray(const ModelSpace& space, const SpacePoint& x, const IdealPoint& xi);

struct LineCertificate {
    SpacePoint through_point;
    IdealPoint end_plus;   // t -> +infinity
    IdealPoint end_minus;  // t -> -infinity
    double residual = 0.0;
    double horizon_T = 0.0;
    bool granted = false;
};

// Point of the (candidate) line at signed parameter t.
SpacePoint line_point(const ModelSpace& space, const LineCertificate& line, double t);

// Both rays of a line, computed once for repeated evaluation.
struct LinePath {
    AsymptoticRay plus;
    AsymptoticRay minus;
    LinePath(const ModelSpace& space, const LineCertificate& line);
    SpacePoint at(const ModelSpace& space, double t) const;
};

// min over t of d(p, line(t)); the function is convex in t.
double distance_to_line(const ModelSpace& space, const LinePath& line, const SpacePoint& p);

LineCertificate is_line(const ModelSpace& space, const SpacePoint& m, const IdealPoint& xi,
                        const IdealPoint& eta, double T, double tol);

struct LineSearchConfig {
    double horizon = 1000.0;
    double tol = 1e-6;
    double seam_range = 100.0;
};

struct LineSearchResult {
    bool found = false;
    LineCertificate best;
};

LineSearchResult find_connecting_line(const ModelSpace& space, const IdealPoint& xi,
                                      const IdealPoint& eta, const LineSearchConfig& config = {});

struct StripReport {
    double max_discrepancy = 0.0;
    double width = 0.0;          // d(a(0), b(0))
    double parallel_spread = 0.0;
    int pairs = 0;
};

StripReport verify_normed_strip(const ModelSpace& space, const LineCertificate& a,
                                const LineCertificate& b, int sample_n, double extent = 10.0,
                                std::uint64_t seed = 0);

// Point of the sphere S(center, R) on the apex ray of cone angle theta (plane: angle about center).
// In a fan the sphere must enclose the apex.
SpacePoint sphere_point(const ModelSpace& space, const SpacePoint& center, double R, double theta);

double cone_chord(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta, double K);
bool in_cone_neighborhood(const ModelSpace& space, const ConeNeighborhood& u, const IdealPoint& eta);

}  // namespace busemann
