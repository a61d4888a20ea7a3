#pragma once

#include <string>
#include <vector>

#include "busemann/tits.hpp"

namespace busemann {

struct Horoball {
    BusemannFunction function;
    SpacePoint level_point;
};

struct Membership {
    bool contained = false;
    bool on_boundary = false;  // |gap| within rounding of the level
    double gap = 0.0;          // Phi(x) - Phi(level_point)
    double margin = 0.0;       // |gap|
};

Membership horoball_contains(const ModelSpace& space, const Horoball& hb, const SpacePoint& x);

struct SphereMinimum {
    double R = 0.0;
    double theta = 0.0;
    SpacePoint point;
    double value = 0.0;  // min over S(o, R) of max(Phi, Psi), both normalized to 0 at o
};

enum class IntersectionVerdict { bounded, unbounded_at_resolution };
const char* to_string(IntersectionVerdict v);

struct IntersectionReport {
    IntersectionVerdict verdict = IntersectionVerdict::unbounded_at_resolution;
    double margin = 0.0;  // bounded: the positive minimum at the first separating R
    double R_decided = 0.0;
    std::vector<SphereMinimum> witnesses;
};

IntersectionReport intersection_bounded(const ModelSpace& space, const BusemannFunction& phi,
                                        const BusemannFunction& psi, const SpacePoint& o,
                                        const std::vector<double>& R_schedule, int grid = 720);

enum class IdealClass { inside, sphere, outside, undetermined };
const char* to_string(IdealClass c);

struct ClassifiedPoint {
    IdealPoint xi;
    Bracket slope;
    IdealClass cls = IdealClass::undetermined;
};

struct IdealHoroball {
    BusemannFunction center;
    int per_sheet = 0;
    std::vector<ClassifiedPoint> points;  // ordered by cone angle
};

// Grid: per_sheet points phi = pi j / n on every fan sheet, 2 pi j / n on the plane.
std::vector<IdealPoint> boundary_grid(const ModelSpace& space, int per_sheet);

IdealHoroball horoball_at_infinity(const ModelSpace& space, const BusemannFunction& f, int per_sheet = 720);

struct ClosureEntry {
    IdealPoint xi;
    IdealClass cls = IdealClass::undetermined;
    bool ray_stays = false;
    double max_gap = 0.0;  // max over sampled T of Phi(ray(T)) - Phi(y)
    double exit_T = 0.0;   // first sampled T with a positive gap (0 if none)
    bool hard_discrepancy = false;
};

struct ClosureReport {
    int agreements = 0;
    int band_points = 0;  // sphere or undetermined: not compared
    int hard_discrepancies = 0;
    std::vector<ClosureEntry> entries;
};

ClosureReport boundary_closure_check(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& y,
                                     int per_sheet = 720);

// Points z_t on the horosphere through y near the ray [y xi], for sphere directions xi with
// phi strictly inside (0, pi).  Reports the cone-angle gap between z_t and xi.
struct HorosphereTrace {
    IdealPoint xi;
    std::vector<double> t;
    std::vector<double> angle_gap;
    std::vector<double> level_gap;  // |Phi(c(t)) - Phi(y)|
    bool accumulates = false;
};

HorosphereTrace horosphere_accumulation(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& y,
                                        const IdealPoint& xi);

struct HorolimitReport {
    std::vector<TitsVerdict> hypotheses;  // le_half per index
    bool hypotheses_hold = false;
    BusemannFunction limit_center;
    IdealPoint limit_xi;
    Bracket limit_slope;
    bool conclusion = false;  // limit slope hi <= kSlopeBand
};

HorolimitReport horolimit_check(const ModelSpace& space, const std::vector<BusemannFunction>& phis,
                                const std::vector<IdealPoint>& xis, double cauchy_tol = 1e-2);

}  // namespace busemann
