#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "busemann/geodesic.hpp"

namespace busemann {

struct BusemannFunction {
    IdealPoint center;
    double offset = 0.0;  // value at the apex
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double horizon = 0.0;
    bool converged = false;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

// Exact value from the asymptotic-route formula (no limit taken).
double busemann_value(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x);

struct BusemannEval {
    double value = 0.0;
    bool closed_form = false;
    std::optional<Bracket> bracket;  // set for the numeric limit
    bool monotone = true;            // d(c(t), x) - t nonincreasing along the trace
    int steps = 0;
};

BusemannEval busemann_eval(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x);

struct SlopeTrace {
    std::vector<double> t;
    std::vector<double> quotient;
    bool monotone = true;
};

Bracket asymptotic_slope(const ModelSpace& space, const BusemannFunction& f, const SpacePoint& x,
                         const IdealPoint& xi, SlopeTrace* trace = nullptr);

// Slope along any ray toward xi; by homogeneity of the apex-normalized function it is
// its value at the unit point of the apex ray.
double homogeneous_slope(const ModelSpace& space, const BusemannFunction& f, const IdealPoint& xi);

enum class DeltaCertificate { none, same_sheet_closed_form, through_apex_exact };

struct DeltaEstimate {
    IdealPoint xi;
    IdealPoint eta;
    SpacePoint basepoint;
    Bracket bracket;
    DeltaCertificate certificate = DeltaCertificate::none;
    double exact_value = 0.0;  // meaningful when certificate != none
    bool monotone = true;
    std::vector<double> trace;
};

struct DeltaOptions {
    int min_samples = 4;
    double width_target = 1e-9;
    double cap = 1073741824.0;
};

DeltaEstimate delta_infinity(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta,
                             const SpacePoint& o, const DeltaOptions& opt = {});

// Closed forms.  Same sheet: gauge(u - v)/2.  Through apex: geodesics between the apex rays
// pass through the apex for every t (one-sided seam derivatives at the apex are >= 0).
std::optional<double> same_sheet_delta(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta);
bool through_apex(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta);

struct BasepointReport {
    DeltaEstimate at_o;
    DeltaEstimate at_o2;
    double difference = 0.0;
    double bound = 0.0;
    double horizon = 0.0;
    bool ok = false;
};

BasepointReport basepoint_invariance_check(const ModelSpace& space, const IdealPoint& xi,
                                           const IdealPoint& eta, const SpacePoint& o,
                                           const SpacePoint& o2);

std::vector<IdealPoint> cone_neighborhood_sample(const ModelSpace& space, const IdealPoint& xi,
                                                 double K, int n, std::uint64_t seed);

// Largest cone-angle offsets (toward decreasing, increasing theta) keeping the chord at K below 1.
std::pair<double, double> cone_reach(const ModelSpace& space, const IdealPoint& xi, double K);

}  // namespace busemann
