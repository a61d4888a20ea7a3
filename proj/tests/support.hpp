#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "busemann/space.hpp"

namespace testing_support {

using namespace busemann;

inline constexpr double pi = 3.14159265358979323846;

inline ModelSpace euclidean() { return ModelSpace::full_plane(NormGauge(2.0)); }
inline ModelSpace p4_plane() { return ModelSpace::full_plane(NormGauge(4.0)); }
inline ModelSpace fan3(double p) { return ModelSpace::fan(std::vector<NormGauge>(3, NormGauge(p))); }

struct NamedSpace {
    std::string name;
    ModelSpace space;
};

inline std::vector<NamedSpace> standard_spaces() {
    return {{"euclidean", euclidean()}, {"p4_plane", p4_plane()}, {"p4_fan3", fan3(4.0)}, {"euclidean_fan3", fan3(2.0)}};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

inline SpacePoint random_point(const ModelSpace& s, std::mt19937_64& rng, double R = 10.0) {
    if (!s.is_fan()) return {0, uniform(rng, -R, R), uniform(rng, -R, R)};
    return canonicalize(s, SpacePoint{pick(rng, s.sheet_count()), uniform(rng, -R, R), uniform(rng, 0.0, R)});
}

inline IdealPoint random_ideal(const ModelSpace& s, std::mt19937_64& rng) {
    if (!s.is_fan()) return {0, uniform(rng, 0.0, 2.0 * pi)};
    return canonicalize(s, IdealPoint{pick(rng, s.sheet_count()), uniform(rng, 0.0, pi)});
}

}  // namespace testing_support
