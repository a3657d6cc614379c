#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cbm/model.hpp"

namespace test_util {

// Parameter sets used throughout the numerical study.
inline cbm::ModelParams wind(double tau = 1.0, double lambda = 4.0, double c_uso = 2000.0,
                             double p = 0.6) {
    return {0.31, 0.31, lambda, p, tau, 300000.0, 1000.0, c_uso};
}

inline cbm::ModelParams lith(double p = 0.6) {
    return {0.31, 0.31, 4.0, p, 1.0, 75500.0, 26500.0, 28800.0};
}

inline cbm::ModelParams artificial() {
    return {0.4, 1.0, 4.0, 0.5, 4.0, 19000.0, 5000.0, 10000.0};
}

// Two-preventive-cost example with c_pm_so > c_pm_uso.
inline cbm::ModelParams uso_cheaper(double p) {
    return {0.9, 1.1, 0.5, p, 1.0, 10000.0, 4500.0, 4000.0};
}

// Deterministic pseudo-random parameter draws for property tests.
struct DrawRng {
    std::uint64_t state;
    explicit DrawRng(std::uint64_t seed) : state(seed * 2654435769ULL + 1) {}
    double uniform(double lo, double hi) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return lo + (hi - lo) * (static_cast<double>(z >> 11) * 0x1.0p-53);
    }
};

inline cbm::ModelParams random_params(DrawRng& rng) {
    cbm::ModelParams pr;
    pr.mu1 = rng.uniform(0.2, 2.0);
    pr.mu2 = rng.uniform(0.2, 2.0);
    pr.lambda = rng.uniform(0.5, 5.0);
    pr.p = rng.uniform(0.3, 0.95);
    pr.tau = rng.uniform(0.4, 2.0);
    pr.c_pm_so = rng.uniform(500.0, 5000.0);
    pr.c_pm_uso = pr.c_pm_so * rng.uniform(1.1, 4.0);
    pr.c_cm = pr.c_pm_uso * rng.uniform(3.0, 40.0);
    return pr;
}

}  // namespace test_util
