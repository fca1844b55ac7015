#include "rocem/basis.hpp"
#include "rocem/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using rocem::Error;
using rocem::SplineBasis;

namespace {

double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

} // namespace

TEST_SUITE("basis") {

TEST_CASE("minimal basis (K=5, d=4) is the Bernstein quartic on a single span") {
    const SplineBasis b = rocem::make_basis(5, 4);
    CHECK(b.size() == 5);
    CHECK(b.degree() == 4);
    REQUIRE(b.breakpoints().size() == 2);
    CHECK(b.breakpoints().front() == 0.0);
    CHECK(b.breakpoints().back() == 1.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double t = unif(rng);
        const Eigen::VectorXd v = b.eval(t);
        for (int k = 0; k < 5; ++k) {
            const double bern = binom(4, k) * std::pow(t, k) * std::pow(1.0 - t, 4 - k);
            CHECK(v[k] == doctest::Approx(bern).epsilon(1e-12));
        }
    }
}

TEST_CASE("default configuration K=50, d=4 has 47 equally spaced breakpoints") {
    const SplineBasis b = rocem::make_basis(50, 4);
    REQUIRE(b.breakpoints().size() == 47);
    const double step = 1.0 / 46.0;
    for (std::size_t j = 0; j < 47; ++j)
        CHECK(b.breakpoints()[j] == doctest::Approx(j * step).epsilon(1e-14));
    CHECK(b.knot_vector().size() == 50 + 4 + 1);
}

TEST_CASE("dimension validation") {
    CHECK_THROWS_WITH_AS(rocem::make_basis(3, 4), doctest::Contains("basis functions"),
                         Error);
    CHECK_THROWS_AS(rocem::make_basis(5, 0), Error);
    try {
        rocem::make_basis(3, 4);
    } catch (const Error& e) {
        CHECK(e.code() == "invalid-dimension");
    }
}

TEST_CASE("boundary reproduction and domain checks") {
    const SplineBasis b = rocem::make_basis(12, 4);
    const Eigen::VectorXd at0 = b.eval(0.0);
    CHECK(at0[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at0.tail(11).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    const Eigen::VectorXd at1 = b.eval(1.0);
    CHECK(at1[11] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(at1.head(11).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    CHECK_THROWS_AS(b.eval(-0.01), Error);
    CHECK_THROWS_AS(b.eval(1.01), Error);
    try {
        b.eval(2.0);
    } catch (const Error& e) {
        CHECK(e.code() == "out-of-domain");
    }
}

TEST_CASE("partition of unity, nonnegativity and window size at random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& [K, d] : std::vector<std::pair<int, int>>{{5, 4}, {10, 3}, {50, 4}}) {
        const SplineBasis b = rocem::make_basis(K, d);
        for (int rep = 0; rep < 1000; ++rep) {
            const double t = unif(rng);
            const Eigen::VectorXd v = b.eval(t);
            CHECK(std::abs(v.sum() - 1.0) < 1e-12);
            CHECK(v.minCoeff() >= 0.0);
            CHECK(v.maxCoeff() <= 1.0);
            int nonzero = 0;
            for (int k = 0; k < K; ++k) nonzero += v[k] != 0.0;
            CHECK(nonzero <= d + 1);
        }
    }
}

TEST_CASE("evaluation matches the direct Cox-de Boor recursion oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> deg(1, 6);
    for (int rep = 0; rep < 10000; ++rep) {
        const int d = deg(rng);
        const int K = d + 1 + std::uniform_int_distribution<int>(0, 40)(rng);
        const SplineBasis b = rocem::make_basis(K, d);
        const double t = rep % 100 == 0 ? (rep % 200 == 0 ? 0.0 : 1.0) : unif(rng);
        const Eigen::VectorXd v = b.eval(t);
        const std::vector<double> ref = oracles::direct_bspline(b.knot_vector(), K, d, t);
        for (int k = 0; k < K; ++k) CHECK(std::abs(v[k] - ref[k]) < 1e-12);
    }
}

TEST_CASE("derivatives agree with central finite differences of the values") {
    const SplineBasis b = rocem::make_basis(14, 4);
    Eigen::MatrixXd ders;
    for (double t : {0.13, 0.37, 0.55, 0.81}) {
        const int first = b.derivs_nonzero(t, 2, ders);
        const double h = 1e-5;
        const Eigen::VectorXd up = b.eval(t + h), dn = b.eval(t - h), mid = b.eval(t);
        for (int j = 0; j <= 4; ++j) {
            const int k = first + j;
            const double fd1 = (up[k] - dn[k]) / (2.0 * h);
            const double fd2 = (up[k] - 2.0 * mid[k] + dn[k]) / (h * h);
            CHECK(ders(1, j) == doctest::Approx(fd1).epsilon(1e-5));
            CHECK(ders(2, j) == doctest::Approx(fd2).epsilon(1e-3));
        }
    }
}

TEST_CASE("penalty matrix: degree validation and band structure") {
    CHECK_THROWS_AS(rocem::penalty_matrix(rocem::make_basis(4, 1)), Error);
    try {
        rocem::penalty_matrix(rocem::make_basis(4, 1));
    } catch (const Error& e) {
        CHECK(e.code() == "unsupported-degree");
    }

    const SplineBasis b2 = rocem::make_basis(9, 2);
    const Eigen::MatrixXd phi2 = rocem::penalty_matrix(b2);
    for (int j = 0; j < 9; ++j)
        for (int k = 0; k < 9; ++k)
            if (std::abs(j - k) > 2) CHECK(phi2(j, k) == 0.0);
}

TEST_CASE("penalty matrix is symmetric PSD with an affine null space") {
    const SplineBasis b = rocem::make_basis(12, 4);
    const Eigen::MatrixXd phi2 = rocem::penalty_matrix(b);
    CHECK((phi2 - phi2.transpose()).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(phi2);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);

    // constants and the identity coefficients generate the affine null space
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(12);
    const Eigen::VectorXd greville = rocem::greville_abscissae(b);
    CHECK((phi2 * ones).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((phi2 * greville).cwiseAbs().maxCoeff() < 1e-10);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        Eigen::VectorXd v(12);
        for (int k = 0; k < 12; ++k) v[k] = normal(rng);
        CHECK(v.dot(phi2 * v) >= -1e-10);

        const double alpha = normal(rng), beta = normal(rng);
        Eigen::VectorXd affine = alpha * ones + beta * greville;
        affine /= affine.norm(); // the quadratic form is 2-homogeneous
        CHECK(std::abs(affine.dot(phi2 * affine)) < 1e-10);
    }
    // a clearly non-affine direction has strictly positive roughness
    Eigen::VectorXd spike = Eigen::VectorXd::Zero(12);
    spike[5] = 1.0;
    CHECK(spike.dot(phi2 * spike) > 1e-6);
}

TEST_CASE("greville coefficients reproduce the identity function") {
    for (const auto& [K, d] : std::vector<std::pair<int, int>>{{6, 2}, {12, 4}, {23, 3}}) {
        const SplineBasis b = rocem::make_basis(K, d);
        const Eigen::VectorXd g = rocem::greville_abscissae(b);
        for (double t : {0.0, 0.2, 0.5, 0.77, 1.0})
            CHECK(b.value_of(g, t) == doctest::Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("penalty entries agree with a dense trapezoid integration oracle") {
    const SplineBasis b = rocem::make_basis(10, 4);
    const Eigen::MatrixXd phi2 = rocem::penalty_matrix(b);

    // composite trapezoid per knot span so grid points align with the kinks
    const auto& brk = b.breakpoints();
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(10, 10);
    Eigen::MatrixXd ders;
    const int per_span = 80000;
    for (std::size_t sp = 0; sp + 1 < brk.size(); ++sp) {
        const double a = brk[sp], c = brk[sp + 1];
        const double h = (c - a) / per_span;
        for (int i = 0; i <= per_span; ++i) {
            const double t = a + i * h;
            const double w = (i == 0 || i == per_span) ? 0.5 * h : h;
            const int first = b.derivs_nonzero(std::min(t, 1.0), 2, ders);
            for (int r = 0; r <= 4; ++r)
                for (int s = 0; s <= 4; ++s)
                    ref(first + r, first + s) += w * ders(2, r) * ders(2, s);
        }
    }
    for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) {
            const double scale = std::max(1.0, std::abs(ref(j, k)));
            CHECK(std::abs(phi2(j, k) - ref(j, k)) / scale < 1e-8);
        }
}

TEST_CASE("fit_transform maps the extended range onto the unit interval") {
    {
        const auto [tf, scaled] = rocem::fit_transform({0.0, 1.0}, 0.0);
        CHECK(tf.to_unit(0.3) == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(scaled[0] == 0.0);
        CHECK(scaled[1] == 1.0);
    }
    {
        const auto [tf, scaled] = rocem::fit_transform({2.0, 4.0}, 0.0);
        CHECK(tf.to_unit(3.0) == doctest::Approx(0.5).epsilon(1e-15));
    }
    {
        // extended bounds lo' = -0.1, hi' = 10.1, so 0 maps to 0.1/10.2
        const auto [tf, scaled] = rocem::fit_transform({0.0, 10.0}, 0.01);
        CHECK(tf.lo_ext() == doctest::Approx(-0.1).epsilon(1e-14));
        CHECK(tf.hi_ext() == doctest::Approx(10.1).epsilon(1e-14));
        CHECK(scaled[0] == doctest::Approx(0.1 / 10.2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rocem::fit_transform({1.0, 1.0, 1.0}, 0.0), Error);
    CHECK_THROWS_AS(rocem::fit_transform({1.0}, 0.0), Error);
    try {
        rocem::fit_transform({3.0, 3.0}, 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == "degenerate-data");
    }

    // round trip
    const auto [tf, scaled] = rocem::fit_transform({-3.0, 0.5, 7.25}, 0.01);
    for (double raw : {-3.0, 0.5, 7.25, 2.0})
        CHECK(tf.from_unit(tf.to_unit(raw)) == doctest::Approx(raw).epsilon(1e-12));
}

} // TEST_SUITE
