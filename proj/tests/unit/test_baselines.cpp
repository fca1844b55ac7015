#include "rocem/baselines.hpp"
#include "rocem/errors.hpp"
#include "rocem/estimators.hpp"
#include "rocem/simharness.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using rocem::Error;
using rocem::MixtureRates;

TEST_SUITE("baselines") {

TEST_CASE("empirical CDF basics") {
    const auto one = rocem::empirical_cdf({0.5});
    CHECK(one(0.49) == 0.0);
    CHECK(one(0.5) == 1.0);
    CHECK(one(0.51) == 1.0);

    const auto two = rocem::empirical_cdf({0.2, 0.8});
    CHECK(two(0.5) == 0.5);
    CHECK(two(0.1) == 0.0);
    CHECK(two(0.9) == 1.0);

    CHECK_THROWS_AS(rocem::empirical_cdf({}), Error);
}

TEST_CASE("empirical CDF of uniforms is close to the identity (DKW)") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> draws(1000);
    for (double& v : draws) v = unif(rng);
    const auto ecdf = rocem::empirical_cdf(draws);

    double sup = 0.0;
    for (double v : ecdf.sorted_values()) sup = std::max(sup, std::abs(ecdf(v) - v));
    CHECK(sup < 0.08); // 99% DKW band at n = 1000 is ~0.0515
}

TEST_CASE("monotone rearrangement sorts and clips") {
    const std::vector<double> monotone{0.1, 0.4, 0.9};
    CHECK(rocem::monotone_rearrange(monotone) == monotone);

    CHECK(rocem::monotone_rearrange({0.3, 0.1, 0.2}) ==
          std::vector<double>{0.1, 0.2, 0.3});

    const auto clipped = rocem::monotone_rearrange({-0.05, 0.5, 1.02});
    CHECK(clipped == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("rearrangement preserves interior values and stays in bounds") {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> normal(0.4, 0.35);
    std::vector<double> vals(200);
    for (double& v : vals) v = normal(rng);

    const auto out = rocem::monotone_rearrange(vals);
    CHECK(std::is_sorted(out.begin(), out.end()));
    for (double v : out) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    // interior (unclipped) values are a permutation of the interior inputs
    std::vector<double> in_interior, out_interior;
    for (double v : vals)
        if (v > 0.0 && v < 1.0) in_interior.push_back(v);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] > 0.0 && out[i] < 1.0) out_interior.push_back(out[i]);
    std::sort(in_interior.begin(), in_interior.end());
    CHECK(in_interior == out_interior);

    // idempotent
    CHECK(rocem::monotone_rearrange(out) == out);
}

TEST_CASE("inversion identity point arithmetic") {
    const auto [f0, f1] = rocem::invert_cdf_point(0.6, 0.3, MixtureRates{0.9, 0.8});
    CHECK(f0 == doctest::Approx((0.48 - 0.03) / 0.7).epsilon(1e-12));
    CHECK(f1 == doctest::Approx((0.9 * 0.3 - 0.2 * 0.6) / 0.7).epsilon(1e-12));

    // perfect labels collapse the identity
    const auto [g0, g1] = rocem::invert_cdf_point(0.6, 0.3, MixtureRates{1.0, 1.0});
    CHECK(g0 == 0.6);
    CHECK(g1 == 0.3);
}

TEST_CASE("perfect-label inversion equals the group empirical CDFs") {
    const auto data = fixtures::contaminated_normal(50, 70, 1.0, 1.0, 53);
    const auto cdfs = rocem::np_inversion_cdfs(data, MixtureRates{1.0, 1.0});

    const std::vector<double> sx(data.t.begin(), data.t.begin() + data.n());
    const std::vector<double> sy(data.t.begin() + data.n(), data.t.end());
    const auto ecdf0 = rocem::empirical_cdf(sx);
    const auto ecdf1 = rocem::empirical_cdf(sy);
    for (double t : cdfs.support) {
        CHECK(cdfs.f0(t) == doctest::Approx(ecdf0(t)).epsilon(1e-12));
        CHECK(cdfs.f1(t) == doctest::Approx(ecdf1(t)).epsilon(1e-12));
    }
}

TEST_CASE("inversion output is a valid CDF pair under contamination") {
    const auto rates = rocem::bayes_rates(0.4, 0.9, 0.9);
    const auto data = fixtures::contaminated_normal(80, 80, rates.pi0, rates.pi1, 59);
    const auto cdfs = rocem::np_inversion_cdfs(data, rates);

    CHECK(cdfs.cum0[cdfs.cum0.size() - 1] == 1.0);
    CHECK(cdfs.cum1[cdfs.cum1.size() - 1] == 1.0);
    for (Eigen::Index i = 1; i < cdfs.cum0.size(); ++i) {
        CHECK(cdfs.cum0[i] >= cdfs.cum0[i - 1]);
        CHECK(cdfs.cum1[i] >= cdfs.cum1[i - 1]);
    }
    const double a = rocem::auc(cdfs);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
}

TEST_CASE("naive fit is exactly the EM fit with perfect-label rates") {
    const auto data = fixtures::contaminated_normal(60, 60, 0.9, 0.85, 61);
    const auto basis = rocem::make_basis(12, 4);
    const auto naive = rocem::naive_fit(data, basis, 0.7);
    const auto em = rocem::fit_em(data, basis, MixtureRates{1.0, 1.0}, 0.7);
    CHECK((naive.coefficients - em.coefficients).cwiseAbs().maxCoeff() == 0.0);
    CHECK(naive.final_objective == em.final_objective);
}

TEST_CASE("inversion baseline overestimates Youden while tracking AUC") {
    // light replication study; the overestimation is the known signature
    const auto rates = rocem::bayes_rates(0.4, 0.95, 0.95);
    const double j_true = 2.0 * oracles::norm_cdf(0.5) - 1.0;
    const double auc_true = oracles::norm_cdf(1.0 / std::sqrt(2.0));

    std::vector<double> j_est, auc_est;
    for (int rep = 0; rep < 60; ++rep) {
        const auto data =
            fixtures::contaminated_normal(500, 500, rates.pi0, rates.pi1, 1000 + rep);
        const auto cdfs = rocem::np_inversion_cdfs(data, rates);
        j_est.push_back(rocem::youden_from_cdfs(cdfs).j);
        auc_est.push_back(rocem::auc(cdfs));
    }
    CHECK(oracles::mean(j_est) - j_true > 0.005); // positive bias
    CHECK(std::abs(oracles::mean(auc_est) - auc_true) < 0.01);
}

} // TEST_SUITE
