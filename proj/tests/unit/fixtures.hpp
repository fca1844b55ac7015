// Shared synthetic-data fixtures for the unit suites.
#pragma once

#include "rocem/likelihood.hpp"

#include <random>
#include <vector>

namespace fixtures {

// Mixture-contaminated two-sample draw from N(0,1) vs N(1,1): nominal
// controls are truly healthy with probability pi0, nominal cases truly
// diseased with probability pi1.
inline rocem::TwoSampleData contaminated_normal(int n, int m, double pi0, double pi1,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(n), y(m);
    for (int i = 0; i < n; ++i) x[i] = normal(rng) + (unif(rng) < pi0 ? 0.0 : 1.0);
    for (int j = 0; j < m; ++j) y[j] = normal(rng) + (unif(rng) < pi1 ? 1.0 : 0.0);
    return rocem::make_two_sample(std::move(x), std::move(y));
}

} // namespace fixtures
