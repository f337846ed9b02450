#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conetree/errors.hpp"
#include "conetree/susy.hpp"

using namespace conetree;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, Eigen::Index k, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd M(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) M(i, j) = u(gen);
    return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd random_spd(std::mt19937_64& gen, Eigen::Index k) {
    const Eigen::MatrixXd M = random_symmetric(gen, k, 1.0);
    return M * M.transpose() + 0.5 * Eigen::MatrixXd::Identity(k, k);
}

Eigen::MatrixXcd scalar(cplx d) { return Eigen::MatrixXcd::Constant(1, 1, d); }

}  // namespace

TEST_CASE("branch determinant in one dimension") {
    for (double d : {0.1, 1.0, 2.5, 40.0}) {
        const auto root = gaussian_branch_det(scalar(d));
        CHECK(std::abs(root.value - std::sqrt(d)) < 1e-14);
        const cplx integral = gaussian_integral_quadrature(scalar(d));
        CHECK(std::abs(integral - std::sqrt(2.0 * std::numbers::pi / d)) < 1e-10);
    }
    const auto root = gaussian_branch_det(scalar({1.0, 1.0}));
    CHECK(std::abs(root.value - std::sqrt(cplx(1.0, 1.0))) < 1e-14);
    const cplx integral = gaussian_integral_quadrature(scalar({1.0, 1.0}));
    CHECK(std::abs(integral - std::sqrt(2.0 * std::numbers::pi) / root.value) < 1e-6);
}

TEST_CASE("branch determinant in two dimensions against quadrature") {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(2, 2);
    D(0, 1) = D(1, 0) = cplx(0.0, 1.0);
    const auto root = gaussian_branch_det(D);
    CHECK(std::abs(root.value * root.value - D.determinant()) < 1e-12);
    // Eigenvalues of the imaginary part are +-1: sqrt(1 + i) sqrt(1 - i) = sqrt(2).
    CHECK(std::abs(root.value - std::sqrt(2.0)) < 1e-14);
    const cplx integral = gaussian_integral_quadrature(D);
    const cplx expected = 2.0 * std::numbers::pi / root.value;
    CHECK(std::abs(integral - expected) / std::abs(expected) < 1e-5);

    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXcd R = random_spd(gen, 2).cast<cplx>() +
                                   cplx(0.0, 1.0) * random_symmetric(gen, 2, 1.5).cast<cplx>();
        const auto r = gaussian_branch_det(R);
        const cplx exp_r = 2.0 * std::numbers::pi / r.value;
        CHECK(std::abs(gaussian_integral_quadrature(R) - exp_r) / std::abs(exp_r) < 1e-5);
    }
}

TEST_CASE("branch determinant squares to det D and rejects bad input") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index k = 1 + trial % 5;
        const Eigen::MatrixXcd D = random_spd(gen, k).cast<cplx>() +
                                   cplx(0.0, 1.0) * random_symmetric(gen, k, 3.0).cast<cplx>();
        const auto root = gaussian_branch_det(D);
        const cplx det = D.determinant();
        CHECK(std::abs(root.value * root.value - det) <= 1e-10 * std::abs(det));
        CHECK(root.value.real() > 0.0);
    }
    CHECK_THROWS_AS(gaussian_branch_det(scalar(-1.0)), DomainRejection);
    CHECK_THROWS_AS(gaussian_branch_det(scalar({0.0, 1.0})), DomainRejection);
    Eigen::MatrixXcd asym = Eigen::MatrixXcd::Identity(2, 2);
    asym(0, 1) = 0.5;
    CHECK_THROWS_AS(gaussian_branch_det(asym), InvalidArgument);
    CHECK_THROWS_AS(gaussian_integral_quadrature(Eigen::MatrixXcd::Identity(4, 4)), InvalidArgument);
}

TEST_CASE("branch is continuous along A + i t B") {
    std::mt19937_64 gen(15);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index k = 2 + trial % 3;
        const Eigen::MatrixXd A = random_spd(gen, k);
        const Eigen::MatrixXd B = random_symmetric(gen, k, 10.0);
        cplx prev = gaussian_branch_det(A.cast<cplx>()).value;
        for (int i = 1; i < 50; ++i) {
            const double t = i / 49.0;
            const Eigen::MatrixXcd D = A.cast<cplx>() + cplx(0.0, t) * B.cast<cplx>();
            const cplx v = gaussian_branch_det(D).value;
            // A sign flip would jump by 2|v|; steps along the path are far smaller.
            CHECK(std::abs(v - prev) < 0.5 * std::max(std::abs(v), std::abs(prev)));
            prev = v;
        }
    }
}

TEST_CASE("iterated D matrices in the scalar case") {
    const auto two = iterated_D_matrices(Eigen::MatrixXd::Constant(1, 1, 2.0), 8);
    REQUIRE_FALSE(two.failure_index.has_value());
    REQUIRE(two.D.size() == 8);
    for (int j = 1; j <= 8; ++j) CHECK(std::abs(two.D[static_cast<std::size_t>(j - 1)](0, 0) + j / (j + 1.0)) < 1e-14);

    const auto zero = iterated_D_matrices(Eigen::MatrixXd::Zero(1, 1), 3);
    CHECK(zero.failure_index == 1);
    CHECK(zero.D.empty());

    const auto one = iterated_D_matrices(Eigen::MatrixXd::Identity(1, 1), 3);
    CHECK(one.failure_index == 2);
    REQUIRE(one.D.size() == 1);
    CHECK(one.D[0](0, 0) == -1.0);
}

TEST_CASE("Schur complement equivalence") {
    const Eigen::MatrixXd two = Eigen::MatrixXd::Constant(1, 1, 2.0);
    CHECK(schur_equivalence_check(two, 3) < 1e-12);
    CHECK_THROWS_AS(schur_equivalence_check(Eigen::MatrixXd::Identity(1, 1), 3), DomainRejection);

    // The first block matrix is -D itself.
    std::mt19937_64 gen(21);
    const Eigen::MatrixXd D3 = random_symmetric(gen, 3, 2.0);
    CHECK((block_tridiagonal(-D3, 1) + D3).cwiseAbs().maxCoeff() == 0.0);

    int checked = 0;
    for (int trial = 0; checked < 20; ++trial) {
        REQUIRE(trial < 200);
        const Eigen::Index k = 1 + trial % 4;
        const int L = 1 + trial % 5;
        const Eigen::MatrixXd D = random_symmetric(gen, k, 3.0);
        if (iterated_D_matrices(D, L).failure_index) continue;
        CHECK(schur_equivalence_check(D, L) < 1e-10);
        ++checked;
    }
}

TEST_CASE("block matrices A_j are invertible exactly off the excluded set") {
    CHECK_FALSE(a_matrices_invertible(0.0, VerticalOperator({0.0}), 1));
    CHECK(a_matrices_invertible(0.5, VerticalOperator({0.0}), 1));
    for (int L = 1; L <= 5; ++L) {
        const auto ex = excluded_set(L);
        for (double p : ex.points) CHECK_FALSE(a_matrices_invertible(p, VerticalOperator({0.0}), L));
        for (int i = 0; i <= 2000; ++i) {
            const double E = -2.5 + 5.0 * i / 2000.0;
            const bool near = ex.distance(E) < 1e-8;
            CHECK(a_matrices_invertible(E, VerticalOperator({0.0}), L) == !near);
        }
    }
    // With several levels, E fails iff some E - a_j is excluded.
    const VerticalOperator A({-0.5, 0.25});
    for (int i = 0; i <= 400; ++i) {
        const double E = -2.0 + 4.0 * i / 400.0;
        const auto ex = excluded_set(3);
        const bool bad = ex.distance(E + 0.5) < 1e-8 || ex.distance(E - 0.25) < 1e-8;
        CHECK(a_matrices_invertible(E, A, 3) == !bad);
    }
    // Energies in the strip a.c. set always pass.
    for (double E : ac_intervals_strip(1, 3, A).sample_points(60)) CHECK(a_matrices_invertible(E, A, 3));
}
