#include "rocem/tuning.hpp"
#include "rocem/errors.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using rocem::CvPlan;
using rocem::Error;
using rocem::MixtureRates;

TEST_SUITE("tuning") {

TEST_CASE("default grid is log-spaced and strictly increasing") {
    const auto grid = rocem::default_nu_grid();
    REQUIRE(grid.size() == 15);
    CHECK(grid.front() == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(grid.back() == doctest::Approx(1e2).epsilon(1e-12));
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    const double ratio = grid[1] / grid[0];
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        CHECK(grid[i + 1] / grid[i] == doctest::Approx(ratio).epsilon(1e-10));
}

TEST_CASE("stratified folds balance both classes") {
    std::vector<int> labels(37, 0);
    labels.insert(labels.end(), 23, 1);
    const auto folds = rocem::stratified_folds(labels, 5, 99);
    REQUIRE(folds.size() == labels.size());

    std::map<int, int> count0, count1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CHECK(folds[i] >= 0);
        CHECK(folds[i] < 5);
        (labels[i] == 0 ? count0 : count1)[folds[i]]++;
    }
    for (const auto& counts : {count0, count1}) {
        int lo = 1 << 30, hi = 0;
        for (int f = 0; f < 5; ++f) {
            const auto it = counts.find(f);
            const int c = it == counts.end() ? 0 : it->second;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        CHECK(hi - lo <= 1);
    }

    // deterministic in the seed
    CHECK(rocem::stratified_folds(labels, 5, 99) == folds);
    CHECK(rocem::stratified_folds(labels, 5, 100) != folds);
}

TEST_CASE("tie-breaking prefers the larger penalty") {
    CHECK(rocem::select_nu_index({-3.0, -1.0, -1.0, -2.0}) == 2);
    CHECK(rocem::select_nu_index({-1.0, -1.0, -1.0}) == 2);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(rocem::select_nu_index({-1.0, -inf}) == 0);
    CHECK_THROWS_AS(rocem::select_nu_index({-inf, -inf}), Error);
}

TEST_CASE("single-candidate grid is returned as-is with its score") {
    const auto data = fixtures::contaminated_normal(30, 30, 0.95, 0.9, 7);
    const auto basis = rocem::make_basis(10, 4);
    CvPlan plan;
    plan.nu_grid = {0.37};
    plan.seed = 1;
    const auto res = rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    CHECK(res.nu_star == 0.37);
    REQUIRE(res.scores.size() == 1);
    CHECK(std::isfinite(res.scores[0]));
    CHECK(res.scores[0] <= 0.0);
}

TEST_CASE("selection is deterministic and attains the curve maximum") {
    const auto data = fixtures::contaminated_normal(60, 60, 0.95, 0.9, 11);
    const auto basis = rocem::make_basis(12, 4);
    CvPlan plan;
    plan.nu_grid = rocem::default_nu_grid(1e-3, 10.0, 7);
    plan.seed = 5;

    const auto a = rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    const auto b = rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    CHECK(a.nu_star == b.nu_star);
    CHECK(a.scores == b.scores);

    double best = -std::numeric_limits<double>::infinity();
    for (double s : a.scores) {
        CHECK(std::isfinite(s));
        CHECK(s <= 0.0);
        best = std::max(best, s);
    }
    const auto it = std::find(a.nu_grid.begin(), a.nu_grid.end(), a.nu_star);
    REQUIRE(it != a.nu_grid.end());
    CHECK(a.scores[it - a.nu_grid.begin()] == best);
}

TEST_CASE("fold-id permutations that preserve the partition do not change the result") {
    const auto data = fixtures::contaminated_normal(40, 40, 0.95, 0.9, 13);
    const auto basis = rocem::make_basis(10, 4);
    const auto grid = rocem::default_nu_grid(1e-3, 1.0, 5);
    const auto folds = rocem::stratified_folds(data.r, 4, 3);

    std::vector<int> permuted(folds.size());
    const int perm[4] = {2, 0, 3, 1};
    for (std::size_t i = 0; i < folds.size(); ++i) permuted[i] = perm[folds[i]];

    const auto a = rocem::cv_select_nu_with_folds(data, basis, MixtureRates{0.95, 0.9},
                                                  folds, grid, {}, 1);
    const auto b = rocem::cv_select_nu_with_folds(data, basis, MixtureRates{0.95, 0.9},
                                                  permuted, grid, {}, 1);
    CHECK(a.nu_star == b.nu_star);
    for (std::size_t g = 0; g < grid.size(); ++g)
        CHECK(a.scores[g] == doctest::Approx(b.scores[g]).epsilon(1e-12));
}

TEST_CASE("cross-validation results do not depend on the worker count") {
    const auto data = fixtures::contaminated_normal(40, 40, 0.95, 0.9, 19);
    const auto basis = rocem::make_basis(10, 4);
    CvPlan plan;
    plan.nu_grid = rocem::default_nu_grid(1e-3, 1.0, 5);
    plan.seed = 23;

    plan.n_threads = 1;
    const auto serial = rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    plan.n_threads = 3;
    const auto threaded = rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    CHECK(serial.nu_star == threaded.nu_star);
    CHECK(serial.scores == threaded.scores);
}

TEST_CASE("insufficient data per class is rejected") {
    const auto data = fixtures::contaminated_normal(3, 30, 0.95, 0.9, 17);
    const auto basis = rocem::make_basis(8, 4);
    CvPlan plan;
    plan.n_folds = 5;
    CHECK_THROWS_AS(rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan), Error);
    try {
        rocem::cv_select_nu(data, basis, MixtureRates{0.95, 0.9}, plan);
    } catch (const Error& e) {
        CHECK(e.code() == "insufficient-data");
    }
}

} // TEST_SUITE
