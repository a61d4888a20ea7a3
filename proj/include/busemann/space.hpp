#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace busemann {

enum class ErrorKind {
    invalid_gauge,
    invalid_space,
    point_outside_space,
    zero_vector,
    coincident_endpoints,
    ray_not_converged,
    non_parallel,
    invalid_argument,
    non_convergent_sequence,
    schema,
};

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

// (1-l)*a + l*b, written so that nonnegative endpoints give nonnegative output.
inline Vec2 lerp(Vec2 a, Vec2 b, double l) {
    return {(1.0 - l) * a.x + l * b.x, (1.0 - l) * a.y + l * b.y};
}

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Vec2 apply_transpose(Vec2 w) const { return {a * w.x + c * w.y, b * w.x + d * w.y}; }
    double det() const { return a * d - b * c; }
    static Mat2 identity() { return {}; }
};

// v -> ||A v||_p
class NormGauge {
public:
    NormGauge(double p, Mat2 A = Mat2::identity());

    double p() const { return p_; }
    const Mat2& A() const { return A_; }

    double norm(Vec2 v) const;
    Vec2 gradient(Vec2 v) const;

private:
    double p_;
    Mat2 A_;
};

double gauge_norm(const NormGauge& g, Vec2 v);
Vec2 gauge_gradient(const NormGauge& g, Vec2 v);

enum class SpaceKind { full_plane, fan };

class ModelSpace {
public:
    static ModelSpace full_plane(NormGauge g);
    static ModelSpace fan(std::vector<NormGauge> sheets);

    SpaceKind kind() const { return kind_; }
    bool is_fan() const { return kind_ == SpaceKind::fan; }
    int sheet_count() const { return static_cast<int>(sheets_.size()); }
    const NormGauge& sheet(int i) const { return sheets_.at(static_cast<size_t>(i)); }
    const std::vector<NormGauge>& sheets() const { return sheets_; }

    int next(int i) const { return (i + 1) % sheet_count(); }
    int prev(int i) const { return (i + sheet_count() - 1) % sheet_count(); }

    // Total cone angle: 2*pi for the plane, k*pi for a fan.
    double cone_angle_total() const;

private:
    ModelSpace(SpaceKind kind, std::vector<NormGauge> sheets)
        : kind_(kind), sheets_(std::move(sheets)) {}

    SpaceKind kind_;
    std::vector<NormGauge> sheets_;
};

struct SpacePoint {
    int sheet = 0;
    double x1 = 0.0;
    double x2 = 0.0;

    Vec2 local() const { return {x1, x2}; }
};

struct IdealPoint {
    int sheet = 0;
    double phi = 0.0;
};

struct ConeNeighborhood {
    IdealPoint center;
    double K = 1.0;
};

// One chart in which a point (or direction) can be written.
struct Presentation {
    int sheet;
    Vec2 local;
};

SpacePoint canonicalize(const ModelSpace& space, SpacePoint p);
IdealPoint canonicalize(const ModelSpace& space, IdealPoint xi);

bool same_point(const ModelSpace& space, const SpacePoint& a, const SpacePoint& b);
bool same_ideal(const ModelSpace& space, const IdealPoint& a, const IdealPoint& b);
bool is_apex(const ModelSpace& space, const SpacePoint& p);

SpacePoint apex(const ModelSpace& space);

// Every chart containing p; one entry for interior points, two on a seam, k at the apex.
std::vector<Presentation> presentations(const ModelSpace& space, const SpacePoint& p);

// Unit vector (gauge 1) of xi in its own sheet.
Vec2 direction_vector(const ModelSpace& space, const IdealPoint& xi);

// Charts in which xi is a direction of the closed sheet (two for seam directions).
std::vector<Presentation> ideal_presentations(const ModelSpace& space, const IdealPoint& xi);

// Gauge length from the apex (well defined on seams because gluing is isometric).
double radius(const ModelSpace& space, const SpacePoint& p);

// Continuous angular coordinate on the space of directions at the apex.
// Plane: theta = phi.  Fan: sheet i spans [i*pi, (i+1)*pi], theta = (i+1)*pi - phi.
double cone_angle(const ModelSpace& space, const IdealPoint& xi);
IdealPoint ideal_from_cone_angle(const ModelSpace& space, double theta);

// Point at gauge distance r from the apex along the canonical ray toward xi.
SpacePoint point_on_apex_ray(const ModelSpace& space, const IdealPoint& xi, double r);

}  // namespace busemann
