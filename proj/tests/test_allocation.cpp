// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "adcalloc/allocation.hpp"
#include "adcalloc/rng.hpp"
#include "oracles.hpp"

using namespace adcalloc;

TEST_CASE("undistorted pilot power accumulates per antenna") {
    std::vector<Eigen::VectorXd> diagR(2);
    diagR[0] = Eigen::VectorXd::Constant(3, 2.0);
    diagR[1] = (Eigen::VectorXd(3) << 1.0, 2.0, 3.0).finished();
    Eigen::VectorXd q(2);
    q << 0.5, 2.0;
    Eigen::VectorXd p = undistorted_pilot_power(diagR, q);
    CHECK(p(0) == doctest::Approx(0.5 * 2 + 2 * 1));
    CHECK(p(2) == doctest::Approx(0.5 * 2 + 2 * 3));
}

TEST_CASE("closed-form bit allocation") {
    SUBCASE("equal received powers give equal bits") {
        Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 3.0);
        auto a = allocate_min_pilot_distortion(p, testutil::const_zeta(4), 12.0);
        for (int m = 0; m < 4; ++m) CHECK(a.bits(m) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("two-antenna worked instance") {
        Eigen::VectorXd p(2);
        p << 1.0, 4.0;
        Eigen::VectorXd zeta = Eigen::VectorXd::Constant(2, 2.0);
        auto a = allocate_min_pilot_distortion(p, zeta, 4.0);
        CHECK(a.bits(0) == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(a.bits(1) == doctest::Approx(2.5).epsilon(1e-12));
    }
    SUBCASE("budget met with equality and power ordering respected") {
        RngStream rng(31);
        for (int trial = 0; trial < 20; ++trial) {
            const int M = 2 + static_cast<int>(rng.uniform(0, 15));
            Eigen::VectorXd p(M);
            for (int m = 0; m < M; ++m) p(m) = std::pow(10.0, rng.uniform(-14, -10));
            const double b_tot = 3.0 * M;
            auto a = allocate_min_pilot_distortion(p, testutil::const_zeta(M), b_tot);
            CHECK(a.bits.sum() == doctest::Approx(b_tot).epsilon(1e-10));
            for (int m = 0; m < M; ++m)
                for (int l = 0; l < M; ++l)
                    if (p(m) > p(l)) CHECK(a.bits(m) >= a.bits(l) - 1e-12);
        }
    }
    SUBCASE("independent projected-gradient solve agrees") {
        RngStream rng(32);
        for (int trial = 0; trial < 5; ++trial) {
            const int M = 3 + static_cast<int>(rng.uniform(0, 10));
            Eigen::VectorXd p(M), zeta(M);
            for (int m = 0; m < M; ++m) {
                p(m) = std::pow(10.0, rng.uniform(-14, -10));
                zeta(m) = rng.uniform(1.1, 1.9);
            }
            const double b_tot = 3.0 * M;
            auto a = allocate_min_pilot_distortion(p, zeta, b_tot);
            Eigen::VectorXd b_num = testutil::pilot_distortion_numeric(p, zeta, b_tot);
            const double f_cf = testutil::pilot_distortion_objective(a.bits, p, zeta);
            const double f_num = testutil::pilot_distortion_objective(b_num, p, zeta);
            CHECK(std::abs(f_cf - f_num) / f_num < 1e-6);
            CHECK(f_cf <= f_num * (1.0 + 1e-9));
        }
    }
    SUBCASE("renormalized perturbations never improve the objective") {
        RngStream rng(33);
        for (int trial = 0; trial < 10; ++trial) {
            const int M = 4;
            Eigen::VectorXd p(M);
            for (int m = 0; m < M; ++m) p(m) = std::pow(10.0, rng.uniform(-13, -11));
            const double b_tot = 3.0 * M;
            Eigen::VectorXd zeta = testutil::const_zeta(M);
            auto a = allocate_min_pilot_distortion(p, zeta, b_tot);
            const double f_opt = testutil::pilot_distortion_objective(a.bits, p, zeta);
            const double delta = 1e-3;
            for (int m = 0; m < M; ++m) {
                Eigen::VectorXd b = a.bits;
                b(m) += delta;
                b.array() -= delta / M;  // renormalize to the budget
                CHECK(testutil::pilot_distortion_objective(b, p, zeta) >= f_opt * (1 - 1e-12));
            }
        }
    }
}

TEST_CASE("first-order optimality verification") {
    Eigen::VectorXd p(3);
    p << 1.0, 2.0, 4.0;
    Eigen::VectorXd zeta = testutil::const_zeta(3);
    const double b_tot = 9.0;
    auto a = allocate_min_pilot_distortion(p, zeta, b_tot);

    SUBCASE("the closed-form output passes") {
        auto rep = verify_kkt(a.eps, p, zeta, b_tot);
        CHECK(rep.ok);
        CHECK(std::abs(rep.budget_residual) < 1e-10);
        CHECK(rep.lambda_spread < 1e-10);
    }
    SUBCASE("equal allocation under unequal powers fails stationarity") {
        Eigen::VectorXd eps = Eigen::VectorXd::Constant(3, 1.6 * std::exp2(-3.0));
        auto rep = verify_kkt(eps, p, zeta, b_tot);
        CHECK_FALSE(rep.ok);
        CHECK(rep.lambda_spread > 1e-8);
    }
    SUBCASE("budget violation is flagged") {
        auto rep = verify_kkt(a.eps * 2.0, p, zeta, b_tot);  // uses one fewer bit per antenna
        CHECK_FALSE(rep.ok);
        CHECK(std::abs(rep.budget_residual) > 1.0);
    }
}

TEST_CASE("integer rounding") {
    SUBCASE("worked traces") {
        Eigen::VectorXd b1(2);
        b1 << 1.5, 2.5;
        Eigen::VectorXi r1 = round_to_integer_bits(b1, 4);
        CHECK(r1(0) == 2);
        CHECK(r1(1) == 2);

        Eigen::VectorXd b2(2);
        b2 << 0.4, 5.6;
        Eigen::VectorXi r2 = round_to_integer_bits(b2, 6);
        CHECK(r2(0) == 1);
        CHECK(r2(1) == 5);
    }
    SUBCASE("budget conservation and floor on random inputs") {
        RngStream rng(34);
        for (int trial = 0; trial < 50; ++trial) {
            const int M = 2 + static_cast<int>(rng.uniform(0, 30));
            const int b_tot = M + static_cast<int>(rng.uniform(0, 4 * M));
            Eigen::VectorXd raw(M);
            for (int m = 0; m < M; ++m) raw(m) = rng.uniform(0.0, 8.0);
            raw *= b_tot / raw.sum();
            Eigen::VectorXi b = round_to_integer_bits(raw, b_tot);
            CHECK(b.sum() == b_tot);
            CHECK(b.minCoeff() >= 1);
        }
    }
    SUBCASE("infeasible budget rejected") {
        Eigen::VectorXd b(3);
        b << 1, 1, 0;
        CHECK_THROWS_AS(round_to_integer_bits(b, 2), std::invalid_argument);
    }
}
