// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "adcalloc/estimation.hpp"
#include "adcalloc/quantizer.hpp"
#include "adcalloc/rng.hpp"
#include "helpers.hpp"

using namespace adcalloc;

TEST_CASE("one-bit codebook is the Gaussian sign quantizer") {
    auto cb = build_codebook(1);
    const double level = std::sqrt(2.0 / std::numbers::pi);
    REQUIRE(cb.levels.size() == 2);
    CHECK(cb.levels(0) == doctest::Approx(-level).epsilon(1e-9));
    CHECK(cb.levels(1) == doctest::Approx(level).epsilon(1e-9));
    CHECK(cb.mse == doctest::Approx(1.0 - 2.0 / std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("known Lloyd-Max distortion values") {
    CHECK(build_codebook(2).mse == doctest::Approx(0.1175).epsilon(2e-3));
    CHECK(build_codebook(3).mse == doctest::Approx(0.03454).epsilon(2e-3));
}

TEST_CASE("codebook structural properties") {
    for (int b = 1; b <= 9; ++b) {
        auto cb = build_codebook(b);
        const int L = 1 << b;
        REQUIRE(cb.levels.size() == L);
        REQUIRE(cb.thresholds.size() == L - 1);
        for (int i = 1; i < L; ++i) CHECK(cb.levels(i) > cb.levels(i - 1));
        for (int i = 1; i < L - 1; ++i) CHECK(cb.thresholds(i) > cb.thresholds(i - 1));
        // symmetric about zero
        for (int i = 0; i < L / 2; ++i)
            CHECK(cb.levels(i) == doctest::Approx(-cb.levels(L - 1 - i)).epsilon(1e-9));

        SUBCASE("quantization is idempotent and sign-symmetric") {
            for (int i = 0; i < L; ++i)
                CHECK(cb.quantize(cb.levels(i)) == doctest::Approx(cb.levels(i)));
            for (double x : {0.03, 0.7, 1.9, 4.2})
                CHECK(cb.quantize(x) == doctest::Approx(-cb.quantize(-x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("distortion decreases with resolution and stays in the model band") {
    double prev = 1.0;
    for (int b = 1; b <= 8; ++b) {
        auto cb = build_codebook(b);
        CHECK(cb.mse < prev);
        prev = cb.mse;
        // effective scaling constant of the additive model
        const double zeta_eff = std::sqrt(cb.mse) * std::exp2(double(b));
        CHECK(zeta_eff > 1.0);
        CHECK(zeta_eff < 2.0);
    }
}

TEST_CASE("analytic cell integration agrees with quadrature") {
    for (int b : {1, 3, 6}) {
        auto cb = build_codebook(b);
        // trapezoid quadrature of E{(x - Q(x))^2} under the standard normal
        const int ns = 400000;
        const double lo = -9.0, hi = 9.0, dx = (hi - lo) / ns;
        double acc = 0.0;
        for (int i = 0; i <= ns; ++i) {
            const double x = lo + i * dx;
            const double e = x - cb.quantize(x);
            const double w = (i == 0 || i == ns) ? 0.5 : 1.0;
            acc += w * e * e * std::exp(-0.5 * x * x) * dx;
        }
        acc /= std::sqrt(2.0 * std::numbers::pi);
        CHECK(gaussian_codebook_mse(cb.thresholds, cb.levels) == doctest::Approx(acc).epsilon(1e-5));
        CHECK(cb.mse == doctest::Approx(acc).epsilon(1e-5));
    }
}

TEST_CASE("Lloyd-Max fixed-point residuals are small") {
    for (int b = 2; b <= 5; ++b) {
        auto cb = build_codebook(b);
        // each threshold is the midpoint of its neighboring levels
        for (int i = 0; i + 1 < cb.levels.size(); ++i)
            CHECK(cb.thresholds(i) ==
                  doctest::Approx(0.5 * (cb.levels(i) + cb.levels(i + 1))).epsilon(1e-7));
        // each level is the conditional mean of its cell (centroid residual)
        // verified indirectly: perturbing any level raises the distortion
        for (int i = 0; i < cb.levels.size(); ++i) {
            for (double d : {-1e-3, 1e-3}) {
                Eigen::VectorXd lv = cb.levels;
                lv(i) += d;
                CHECK(gaussian_codebook_mse(cb.thresholds, lv) >= cb.mse * (1 - 1e-12));
            }
        }
    }
}

TEST_CASE("high resolution is transparent") {
    auto cb = build_codebook(14);
    CHECK(cb.mse < 1e-6);
    RngStream rng(5);
    for (int t = 0; t < 100; ++t) {
        const double x = rng.gauss();
        CHECK(std::abs(cb.quantize(x) - x) < 1e-3);
    }
}

TEST_CASE("block quantization distortion matches the codebook MSE") {
    const int M = 2, n = 200000;
    std::vector<QuantizerCodebook> cbs = {build_codebook(2), build_codebook(4)};
    Eigen::VectorXd agc(M);
    agc << 1.0, 3.0;  // per-antenna std dev per real dimension
    Eigen::MatrixXcd block(M, n);
    RngStream rng(9);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < M; ++m)
            block(m, j) = agc(m) * std::complex<double>(rng.gauss(), rng.gauss());
    auto out = quantize_block(block, cbs, agc);
    for (int m = 0; m < M; ++m) {
        const double err = (out.y_q.row(m) - block.row(m)).squaredNorm() / n;
        const double expect = 2.0 * cbs[m].mse * agc(m) * agc(m);
        CHECK(err == doctest::Approx(expect).epsilon(0.02));
    }
}

TEST_CASE("statistical gain control matches the sample scale") {
    const int M = 4, K = 2;
    auto net = testutil::small_net(M, K, 41);
    const double sigma2 = NetworkConfig{}.sigma2;
    Eigen::VectorXd agc = statistical_agc(net.correlation, net.pilot_energy, sigma2);
    ChannelSampler sampler(net.correlation);
    RngStream rng(42);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(M);
    const int n = 50000;
    Eigen::MatrixXcd h(M, K);
    for (int t = 0; t < n; ++t) {
        sampler.draw_all(h, rng);
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(M);
        for (int i = 0; i < K; ++i) y += std::sqrt(net.pilot_energy(i)) * h.col(i);
        for (int m = 0; m < M; ++m) y(m) += std::sqrt(sigma2) * rng.cgauss();
        acc += y.cwiseAbs2();
    }
    for (int m = 0; m < M; ++m)
        CHECK(std::sqrt(acc(m) / n / 2.0) == doctest::Approx(agc(m)).epsilon(0.02));
}

TEST_CASE("numeric LMMSE converges to the analytic filter at high resolution") {
    const int M = 4, K = 2, tau_p = 2;
    auto net = testutil::small_net(M, K, 47);
    const double sigma2 = NetworkConfig{}.sigma2;
    ImpairmentProfile clean;
    clean.eps = Eigen::VectorXd::Zero(M);
    clean.zeta = testutil::const_zeta(M);
    auto st = build_estimator(net.correlation, clean, net.pilot_energy, sigma2, tau_p);
    auto num = lmmse_numeric(net.correlation, Eigen::VectorXi::Constant(M, 14), net.pilot_energy,
                             sigma2, tau_p, 200000, 7);
    for (int k = 0; k < K; ++k)
        CHECK((num.filter[k] - st.filter[k]).norm() / st.filter[k].norm() < 0.02);
}

TEST_CASE("one-bit estimation error sits in the expected band") {
    const int M = 4, K = 2, tau_p = 2;
    auto net = testutil::small_net(M, K, 48);
    const double sigma2 = NetworkConfig{}.sigma2;
    ImpairmentProfile clean;
    clean.eps = Eigen::VectorXd::Zero(M);
    clean.zeta = testutil::const_zeta(M);
    auto st = build_estimator(net.correlation, clean, net.pilot_energy, sigma2, tau_p);
    auto num = lmmse_numeric(net.correlation, Eigen::VectorXi::Constant(M, 1), net.pilot_energy,
                             sigma2, tau_p, 200000, 8);
    for (int k = 0; k < K; ++k) {
        const double e1 = num.err_cov[k].real().trace();
        const double e0 = st.err_cov[k].real().trace();
        // materially worse than unquantized but within a small constant factor
        CHECK(e1 > e0 * 1.05);
        CHECK(e1 < net.correlation.R[k].real().trace() * 1.05);
    }
}

TEST_CASE("exact pipeline is transparent at high resolution") {
    const NetworkConfig base;
    const int M = 4, K = 2, tau_p = 2;
    auto net = testutil::small_net(M, K, 49);
    Eigen::VectorXd p = Eigen::VectorXd::Constant(K, base.rho_max);
    ImpairmentProfile clean;
    clean.eps = Eigen::VectorXd::Zero(M);
    clean.zeta = testutil::const_zeta(M);
    auto st = build_estimator(net.correlation, clean, net.pilot_energy, base.sigma2, tau_p);
    auto cf = sinr_mr_closed_form(net.correlation, st, clean, p, net.pilot_energy, base.sigma2,
                                  tau_p, base.tau_c);
    auto ex = se_exact_quantization(net, Eigen::VectorXi::Constant(M, 14), CombinerKind::MR, p,
                                    base.sigma2, tau_p, base.tau_c, 100000, 11);
    Eigen::VectorXd se_cf = se_from_sinr(cf.sinr, tau_p, base.tau_c);
    for (int k = 0; k < K; ++k)
        CHECK(ex.se(k) == doctest::Approx(se_cf(k)).epsilon(0.03));
}
