// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adcalloc {

namespace {
constexpr double kPi = std::numbers::pi;

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

// 10*log10(F) ~ N(0, sigma_db^2)
double lognormal_draw(double sigma_db, RngStream& rng) {
    return db_to_lin(sigma_db * rng.gauss());
}
} // namespace

const char* to_string(ChannelCase c) {
    switch (c) {
        case ChannelCase::CoCorrI: return "CoCorrI";
        case ChannelCase::CoCorrD1: return "CoCorrD1";
        case ChannelCase::CoCorrDK: return "CoCorrDK";
        case ChannelCase::CellFree: return "CellFree";
    }
    return "?";
}

ChannelCase channel_case_from_string(const std::string& s) {
    if (s == "CoCorrI") return ChannelCase::CoCorrI;
    if (s == "CoCorrD1") return ChannelCase::CoCorrD1;
    if (s == "CoCorrDK") return ChannelCase::CoCorrDK;
    if (s == "CellFree") return ChannelCase::CellFree;
    throw std::invalid_argument("unknown channel case: " + s);
}

void NetworkConfig::validate() const {
    if (M < 1 || K < 1) throw std::invalid_argument("M and K must be >= 1");
    if (pilot_len() < K) throw std::invalid_argument("tau_p must allow orthogonal pilots (>= K)");
    if (pilot_len() > tau_c) throw std::invalid_argument("tau_p must not exceed tau_c");
    if (side_length_km <= 0 || min_dist_km <= 0 || alpha <= 0 || rho_max <= 0 || sigma2 <= 0 ||
        qbar_over_sigma2 <= 0)
        throw std::invalid_argument("power/distance parameters must be positive");
}

Eigen::MatrixXcd local_scattering(int M, double theta_rad, double sigma_ang_deg) {
    const double sigma = sigma_ang_deg * kPi / 180.0;
    const double s = std::sin(theta_rad);
    const double c = std::cos(theta_rad);
    Eigen::MatrixXcd Rbar(M, M);
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp <= m; ++mp) {
            const double d = static_cast<double>(m - mp);
            const double phase = kPi * d * s;
            const double spread = sigma * kPi * d * c;
            const std::complex<double> v =
                std::polar(std::exp(-0.5 * spread * spread), phase);
            Rbar(m, mp) = v;
            Rbar(mp, m) = std::conj(v);
        }
    }
    return Rbar;
}

CorrelationSet build_correlation(ChannelCase chan_case, const LargeScaleGeometry& geo) {
    const int M = static_cast<int>(geo.beta.rows());
    const int K = static_cast<int>(geo.beta.cols());
    CorrelationSet out;
    out.R.reserve(K);
    out.diagR.reserve(K);
    out.beta_bar.resize(K);

    for (int k = 0; k < K; ++k) {
        const Eigen::VectorXd sqrt_beta = geo.beta.col(k).cwiseSqrt();
        Eigen::MatrixXcd R;
        if (chan_case == ChannelCase::CellFree) {
            R = geo.beta.col(k).asDiagonal().toDenseMatrix().cast<std::complex<double>>();
        } else {
            Eigen::MatrixXcd Rbar = local_scattering(M, geo.theta(k), geo.sigma_ang_deg);
            R = sqrt_beta.asDiagonal() * Rbar * sqrt_beta.asDiagonal();
        }
        // Hermitian cleanup and PSD repair (clip negative eigenvalues, keep trace).
        R = 0.5 * (R + R.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
        const double tr = R.real().trace();
        if (es.eigenvalues().minCoeff() < -1e-10 * tr) {
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            const double tr_clipped = ev.sum();
            if (tr_clipped > 0.0) ev *= tr / tr_clipped;
            R = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
            R = 0.5 * (R + R.adjoint()).eval();
            ++out.psd_repairs;
        }
        out.diagR.push_back(R.diagonal().real());
        out.beta_bar(k) = R.real().trace() / M;
        out.R.push_back(std::move(R));
    }
    return out;
}

NetworkRealization drop_network(const NetworkConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int M = cfg.M;
    const int K = cfg.K;
    const double half = cfg.side_length_km / 2.0;
    const bool cell_free = cfg.chan_case == ChannelCase::CellFree;

    RngStream geo_rng = RngStream::derive(seed, {0});
    RngStream fade_rng = RngStream::derive(seed, {1});

    NetworkRealization out;
    out.antenna_positions.resize(M, 2);
    if (cell_free) {
        for (int m = 0; m < M; ++m) {
            out.antenna_positions(m, 0) = geo_rng.uniform(-half, half);
            out.antenna_positions(m, 1) = geo_rng.uniform(-half, half);
        }
    } else {
        out.antenna_positions.setZero();
    }

    out.ue_positions.resize(K, 2);
    constexpr int kMaxAttempts = 10000;
    for (int k = 0; k < K; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            const double x = geo_rng.uniform(-half, half);
            const double y = geo_rng.uniform(-half, half);
            bool ok = true;
            for (int m = 0; m < M && ok; ++m) {
                const double dx = x - out.antenna_positions(m, 0);
                const double dy = y - out.antenna_positions(m, 1);
                ok = std::hypot(dx, dy) >= cfg.min_dist_km;
            }
            if (ok) {
                out.ue_positions(k, 0) = x;
                out.ue_positions(k, 1) = y;
                placed = true;
            }
        }
        if (!placed)
            throw std::runtime_error("drop_network: min-distance rejection sampling exhausted");
    }

    const double omega_inv = db_to_lin(-cfg.omega_db);

    LargeScaleGeometry geo;
    geo.beta.resize(M, K);
    geo.theta.resize(K);
    geo.sigma_ang_deg = cfg.sigma_ang_deg;

    // Rank-1 per-antenna LSF variations shared across UEs (Co-corr-D1).
    Eigen::VectorXd lsf_shared(M);
    for (int m = 0; m < M; ++m) lsf_shared(m) = lognormal_draw(cfg.sigma_lsf_db, fade_rng);

    for (int k = 0; k < K; ++k) {
        const double x = out.ue_positions(k, 0);
        const double y = out.ue_positions(k, 1);
        geo.theta(k) = std::atan2(y - out.antenna_positions(0, 1),
                                  x - out.antenna_positions(0, 0));
        if (cell_free) {
            // Independent shadow draws per (antenna, UE) pair.
            for (int m = 0; m < M; ++m) {
                const double d = std::hypot(x - out.antenna_positions(m, 0),
                                            y - out.antenna_positions(m, 1));
                geo.beta(m, k) =
                    omega_inv * std::pow(d, -cfg.alpha) * lognormal_draw(cfg.sigma_sh_db, fade_rng);
            }
        } else {
            const double d = std::hypot(x, y);
            const double beta_bar =
                omega_inv * std::pow(d, -cfg.alpha) * lognormal_draw(cfg.sigma_sh_db, fade_rng);
            switch (cfg.chan_case) {
                case ChannelCase::CoCorrI:
                    geo.beta.col(k).setConstant(beta_bar);
                    break;
                case ChannelCase::CoCorrD1:
                    geo.beta.col(k) = beta_bar * lsf_shared;
                    break;
                case ChannelCase::CoCorrDK:
                    for (int m = 0; m < M; ++m)
                        geo.beta(m, k) = beta_bar * lognormal_draw(cfg.sigma_lsf_db, fade_rng);
                    break;
                default:
                    break;
            }
        }
    }

    out.correlation = build_correlation(cfg.chan_case, geo);
    out.beta_bar = out.correlation.beta_bar;

    // Statistical channel inversion: q_k = min(rho_max, qbar / beta_bar_k).
    const double qbar = cfg.qbar_over_sigma2 * cfg.sigma2;
    out.pilot_energy.resize(K);
    for (int k = 0; k < K; ++k)
        out.pilot_energy(k) = std::min(cfg.rho_max, qbar / out.beta_bar(k));
    return out;
}

ChannelSampler::ChannelSampler(const CorrelationSet& corr) {
    factor_.reserve(corr.R.size());
    for (const auto& R : corr.R) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R);
        // zero out numerically-null directions so low-rank draws stay exact
        const double floor = 1e-14 * std::max(0.0, es.eigenvalues().maxCoeff());
        Eigen::VectorXd ev = es.eigenvalues();
        for (int i = 0; i < ev.size(); ++i) ev(i) = ev(i) > floor ? ev(i) : 0.0;
        factor_.push_back(es.eigenvectors() * ev.cwiseSqrt().asDiagonal());
    }
}

Eigen::VectorXcd ChannelSampler::draw(int k, RngStream& rng) const {
    const auto& F = factor_.at(k);
    Eigen::VectorXcd g(F.cols());
    for (int i = 0; i < g.size(); ++i) g(i) = rng.cgauss();
    return F * g;
}

void ChannelSampler::draw_all(Eigen::MatrixXcd& h, RngStream& rng) const {
    const int M = static_cast<int>(factor_[0].rows());
    const int K = static_cast<int>(factor_.size());
    h.resize(M, K);
    for (int k = 0; k < K; ++k) h.col(k) = draw(k, rng);
}

} // namespace adcalloc
