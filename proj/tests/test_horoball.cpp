#include <gtest/gtest.h>

#include "busemann/horoball.hpp"
#include "support.hpp"

using namespace busemann;
using namespace testing_support;

namespace {

double cone_gap(const ModelSpace& s, const IdealPoint& a, const IdealPoint& b) {
    const double total = s.cone_angle_total();
    const double g = std::fabs(cone_angle(s, a) - cone_angle(s, b));
    return std::min(g, total - g);
}

}  // namespace

TEST(Horoball, MembershipExamples) {
    const ModelSpace s = euclidean();
    // beta of the upward direction is -x2
    const Horoball hb{{{0, pi / 2}, 0.0}, {0, 0, 0}};
    const Membership in = horoball_contains(s, hb, {0, 3, 1});
    EXPECT_TRUE(in.contained);
    EXPECT_FALSE(in.on_boundary);
    EXPECT_NEAR(in.gap, -1.0, 1e-15);
    const Membership edge = horoball_contains(s, hb, {0, 5, 0});
    EXPECT_TRUE(edge.contained);
    EXPECT_TRUE(edge.on_boundary);
    EXPECT_FALSE(horoball_contains(s, hb, {0, 0, -0.5}).contained);
}

TEST(HoroballProperty, ConvexAndNested) {
    std::mt19937_64 rng(51);
    for (const auto& [name, s] : standard_spaces()) {
        for (int i = 0; i < 1000; ++i) {
            const Horoball hb{{random_ideal(s, rng), 0.0}, random_point(s, rng, 3.0)};
            const SpacePoint x = random_point(s, rng), y = random_point(s, rng);
            const Membership mx = horoball_contains(s, hb, x), my = horoball_contains(s, hb, y);
            if (mx.contained && my.contained) {
                EXPECT_TRUE(horoball_contains(s, hb, midpoint(s, x, y)).contained) << name;
            }
            // moving along the ray toward the center goes deeper by exactly the arclength
            const AsymptoticRay r = asymptotic_ray(s, x, hb.function.center);
            const Membership deeper = horoball_contains(s, hb, r.at(s, 2.0));
            EXPECT_NEAR(deeper.gap, mx.gap - 2.0, 1e-9 * (1 + std::fabs(mx.gap))) << name;
        }
    }
}

TEST(Intersection, EuclideanPlaneIsNeverBounded) {
    const ModelSpace s = euclidean();
    const std::vector<double> Rs{1, 10, 100};
    for (double a : {pi / 2, 2.0, pi}) {
        const IntersectionReport r = intersection_bounded(s, {{0, 0}, 0.0}, {{0, a}, 0.0}, {0, 0, 0}, Rs, 180);
        EXPECT_EQ(r.verdict, IntersectionVerdict::unbounded_at_resolution) << a;
        ASSERT_EQ(r.witnesses.size(), Rs.size());
        // min over S(0, R) of max(-cos(t), -cos(a - t)) = -R cos(a / 2)
        for (const SphereMinimum& w : r.witnesses) EXPECT_NEAR(w.value, -w.R * std::cos(a / 2), 1e-9 * (1 + w.R));
    }
}

TEST(Intersection, WideConeSeparatesHoroballs) {
    // Euclidean fan of angle 3 pi, centers 3 pi / 2 apart both ways: the sectors of half-width pi/2 meet only at o
    const ModelSpace s = fan3(2.0);
    const IdealPoint xi{0, pi / 2}, eta{1, 0};
    ASSERT_NEAR(cone_gap(s, xi, eta), 1.5 * pi, 1e-12);
    const IntersectionReport r = intersection_bounded(s, {xi, 0.0}, {eta, 0.0}, apex(s), {1, 10}, 360);
    EXPECT_EQ(r.verdict, IntersectionVerdict::bounded);
    EXPECT_EQ(r.R_decided, 1.0);
    EXPECT_NEAR(r.margin, std::sqrt(0.5), 1e-9);
    EXPECT_STREQ(to_string(r.verdict), "bounded");
}

TEST(BoundaryGrid, OrderedByConeAngle) {
    for (const auto& [name, s] : standard_spaces()) {
        const auto g = boundary_grid(s, 24);
        EXPECT_EQ(g.size(), static_cast<size_t>(s.is_fan() ? 24 * s.sheet_count() : 24)) << name;
        for (size_t i = 1; i < g.size(); ++i) EXPECT_LT(cone_angle(s, g[i - 1]), cone_angle(s, g[i])) << name;
    }
}

TEST(ClassifyOracle, EuclideanConesFollowTheCosine) {
    for (const auto& [name, s] : standard_spaces()) {
        if (name != "euclidean" && name != "euclidean_fan3") continue;
        const BusemannFunction f{s.is_fan() ? IdealPoint{1, pi / 3} : IdealPoint{0, 1.0}, 0.0};
        const IdealHoroball h = horoball_at_infinity(s, f, 120);
        int inside = 0, sphere = 0;
        for (const ClassifiedPoint& c : h.points) {
            const double slope = -std::cos(std::min(cone_gap(s, f.center, c.xi), pi));
            EXPECT_NEAR(c.slope.hi, slope, 1e-9) << name;
            if (std::fabs(slope) < 1e-12) {
                EXPECT_EQ(c.cls, IdealClass::sphere) << name;
                ++sphere;
            } else if (slope < -1e-5) {
                EXPECT_EQ(c.cls, IdealClass::inside) << name;
                ++inside;
            } else if (slope > 1e-5) {
                EXPECT_EQ(c.cls, IdealClass::outside) << name;
            }
        }
        EXPECT_GT(inside, 0) << name;
    }
}

TEST(Classify, EuclideanCounts) {
    // 360 directions 1 degree apart around beta of direction 0: 179 strictly within 90 degrees, 2 at exactly 90
    const IdealHoroball h = horoball_at_infinity(euclidean(), {{0, 0}, 0.0}, 360);
    int counts[4] = {0, 0, 0, 0};
    for (const auto& c : h.points) ++counts[static_cast<int>(c.cls)];
    EXPECT_EQ(counts[static_cast<int>(IdealClass::inside)], 179);
    EXPECT_EQ(counts[static_cast<int>(IdealClass::sphere)], 2);
    EXPECT_EQ(counts[static_cast<int>(IdealClass::outside)], 179);
    EXPECT_EQ(counts[static_cast<int>(IdealClass::undetermined)], 0);
}

TEST(Closure, NoHardDiscrepancies) {
    std::mt19937_64 rng(52);
    for (const auto& [name, s] : standard_spaces()) {
        const BusemannFunction f{random_ideal(s, rng), 0.0};
        const ClosureReport r = boundary_closure_check(s, f, random_point(s, rng, 2.0), 36);
        EXPECT_EQ(r.hard_discrepancies, 0) << name;
        EXPECT_GT(r.agreements, 0) << name;
        EXPECT_EQ(r.agreements + r.band_points + r.hard_discrepancies, static_cast<int>(r.entries.size())) << name;
    }
}

TEST(Horosphere, AccumulatesAtSphereDirections) {
    const ModelSpace s = euclidean();
    const HorosphereTrace tr = horosphere_accumulation(s, {{0, 0}, 0.0}, {0, 1, 1}, {0, pi / 2});
    EXPECT_TRUE(tr.accumulates);
    ASSERT_GE(tr.angle_gap.size(), 2u);
    EXPECT_LE(tr.angle_gap.back(), tr.angle_gap.front());
    EXPECT_THROW(horosphere_accumulation(fan3(2.0), {{0, 1.0}, 0.0}, {0, 0, 1}, {1, 0.0}), GeometryError);
}

TEST(Horolimit, LimitOfBoundaryPairs) {
    const ModelSpace s = euclidean();
    std::vector<BusemannFunction> phis;
    std::vector<IdealPoint> xis;
    // centers 1/n, points 1/n + pi/2 - 1/n^2: each pair strictly within pi/2
    for (int n = 10; n <= 160; n *= 2) {
        phis.push_back({{0, 1.0 / n}, 0.0});
        xis.push_back({0, 1.0 / n + pi / 2 - 1.0 / (n * n)});
    }
    const HorolimitReport r = horolimit_check(s, phis, xis);
    EXPECT_TRUE(r.hypotheses_hold);
    EXPECT_TRUE(r.conclusion);
    EXPECT_LT(cone_gap(s, r.limit_center.center, {0, 0.0}), 1e-2);

    std::vector<BusemannFunction> jumpy{{{0, 0.0}, 0.0}, {{0, 1.0}, 0.0}, {{0, 0.0}, 0.0}, {{0, 1.0}, 0.0}};
    try {
        horolimit_check(s, jumpy, {xis.begin(), xis.begin() + 4});
        FAIL() << "non-convergent centers accepted";
    } catch (const GeometryError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_convergent_sequence);
    }
}
