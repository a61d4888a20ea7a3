#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "busemann/asymptotics.hpp"

namespace busemann {

enum class Relation { lt_pi, le_pi, ge_pi, gt_pi, eq_pi, lt_half, le_half, ge_half, gt_half, eq_half };
enum class Outcome { holds, fails, undetermined };
enum class CertificateKind { exact, numeric };

const char* to_string(Relation r);
const char* to_string(Outcome o);
const char* to_string(CertificateKind c);
const char* to_string(DeltaCertificate c);
std::optional<Relation> relation_from_string(const std::string& s);

Outcome negate(Outcome o);
Outcome conjunction(Outcome a, Outcome b);

struct Resolution {
    std::vector<double> K_schedule{10.0, 100.0, 1000.0};
    int samples = 64;
    double horizon = 1073741824.0;
    std::uint64_t seed = 0;
};

// Margins of the decision rules.
inline constexpr double kDeltaMargin = 1e-6;      // numeric delta brackets
inline constexpr double kDeltaFailSlack = 1e-9;   // lo > 1 - slack decides "fails"
inline constexpr double kClosedFormGuard = 64.0 * 2.220446049250313e-16;
inline constexpr double kSlopeBand = 1e-6;

struct NeighborhoodProbe {
    double K = 0.0;
    int pairs_checked = 0;
    int certified_pairs = 0;  // pairs with an exact delta = 1 certificate
    bool witness_found = false;
    bool obstruction = false;
    IdealPoint witness_xi{};
    IdealPoint witness_eta{};
    double witness_delta = 0.0;
};

struct TitsVerdict {
    Relation relation = Relation::lt_pi;
    Outcome outcome = Outcome::undetermined;
    double margin = 0.0;
    CertificateKind certificate = CertificateKind::numeric;
    double K_max = 0.0;
    int samples = 0;
    double horizon = 0.0;
    std::optional<DeltaEstimate> delta;
    std::optional<Bracket> slope;
    std::vector<NeighborhoodProbe> probes;
};

TitsVerdict td_pi(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta, Relation relation,
                  const Resolution& res = {});

// Relations between the class of f and the ideal point xi (slope along rays toward xi).
TitsVerdict td_half_pi(const ModelSpace& space, const BusemannFunction& f, const IdealPoint& xi,
                       Relation relation, const Resolution& res = {});

enum class QuasiStatus { certified, falsified, undetermined };
const char* to_string(QuasiStatus s);

struct QuasiWitness {
    double s;
    double t;
    double measured;
};

struct QuasiCert {
    double epsilon = 0.0;
    QuasiStatus status = QuasiStatus::undetermined;
    std::optional<double> b;
    std::optional<QuasiWitness> falsification;
    DeltaEstimate delta;
    double max_upper_excess = 0.0;  // max of d - (s + t); must stay <= 0
    int pairs = 0;
};

QuasiCert certify_quasigeodesic(const ModelSpace& space, const IdealPoint& xi, const IdealPoint& eta,
                                const SpacePoint& o, double epsilon, double horizon);

struct ParabolaWitness {
    double alpha;
    double b;
    double x0;
    double y0;
    double chord;
    double path_length;
    double gap() const { return path_length - chord; }
};

ParabolaWitness parabola_gap(double alpha, double b);

enum class Side { any, eta_to_xi, xi_to_eta };
const char* to_string(Side s);

struct StripAtK {
    double K = 0.0;
    SpacePoint b_point;
    LineCertificate parallel;
    StripReport strip;
    double distance_to_boundary = 0.0;
    double nest_error = 0.0;  // consistency with the next-wider strip
};

struct SemiplaneModel {
    bool found = false;
    Side side = Side::any;
    LineCertificate boundary;
    IdealPoint transversal{};  // direction of the first b_K, seen from the apex
    std::vector<StripAtK> strips;
    double max_discrepancy = 0.0;
    std::string obstruction;
    double obstruction_K = 0.0;
};

struct SemiplaneConfig {
    int grid = 720;
    int strip_samples = 8;
    double line_horizon = 1000.0;
    double line_tol = 1e-6;
    double discrepancy_tol = 1e-6;
};

SemiplaneModel detect_normed_semiplane(const ModelSpace& space, const LineCertificate& line,
                                       const std::vector<double>& K_schedule, Side side = Side::any,
                                       const SemiplaneConfig& config = {});

enum class TriangleMode { horofunction_two_points, two_horofunctions_one_point, chained };
const char* to_string(TriangleMode m);

struct TriangleReport {
    TriangleMode mode;
    TitsVerdict hypothesis_1;
    TitsVerdict hypothesis_2;
    TitsVerdict conclusion;
    bool hypotheses_hold = false;
    bool counter_instance = false;
};

// horofunction_two_points:     f = beta_a; points b, c; Td(f,b), Td(f,c) <= pi/2  =>  Td(b,c) <= pi.
// two_horofunctions_one_point: f = beta_a, g = beta_b; point c; Td(f,c), Td(g,c) <= pi/2  =>  Td(a,b) <= pi.
// chained (not a theorem):     Td(beta_a, b) <= pi/2, Td(beta_b, c) <= pi/2  =>  Td(a,c) <= pi.
TriangleReport triangle_check_pi_half(const ModelSpace& space, TriangleMode mode, const IdealPoint& a,
                                      const IdealPoint& b, const IdealPoint& c, const Resolution& res = {});

}  // namespace busemann
