// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/estimation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adcalloc {

EstimatorState build_estimator(const CorrelationSet& corr, const ImpairmentProfile& profile,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p) {
    const int M = corr.antennas();
    const int K = corr.ues();
    if (profile.antennas() != M) throw std::invalid_argument("profile/correlation size mismatch");
    if (pilot_energy.size() != K) throw std::invalid_argument("pilot_energy size mismatch");
    if ((pilot_energy.array() <= 0.0).any()) throw std::invalid_argument("q_k must be positive");
    if (sigma2 <= 0.0) throw std::invalid_argument("sigma2 must be positive");
    if (tau_p < K) throw std::invalid_argument("tau_p < K");

    // Pilot distortion: sum_i q_i D_eps D_{R_i} D_eps, a nonnegative diagonal.
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(M);
    for (int i = 0; i < K; ++i)
        dist += pilot_energy(i) * profile.eps.cwiseAbs2().cwiseProduct(corr.diagR[i]);

    EstimatorState st;
    st.Psi.reserve(K);
    st.filter.reserve(K);
    st.err_cov.reserve(K);
    st.A.reserve(K);
    st.cond.resize(K);

    for (int k = 0; k < K; ++k) {
        const double scale = 1.0 / (tau_p * pilot_energy(k));
        Eigen::MatrixXcd Psi = corr.R[k];
        Psi.diagonal().array() += scale * (sigma2 + dist.array());

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Psi);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        st.cond(k) = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
        if (!(st.cond(k) < 1e14))
            throw std::runtime_error("build_estimator: Psi_k numerically singular");

        Eigen::LDLT<Eigen::MatrixXcd> ldlt(Psi);
        if (ldlt.info() != Eigen::Success) {
            Eigen::MatrixXcd jittered = Psi;
            jittered.diagonal().array() += 1e-14 * Psi.real().trace() / M;
            ldlt.compute(jittered);
        }
        // R Psi^{-1} = (Psi^{-1} R)^H for Hermitian R, Psi.
        Eigen::MatrixXcd filt = ldlt.solve(corr.R[k]).adjoint();
        Eigen::MatrixXcd A = filt * corr.R[k];
        A = 0.5 * (A + A.adjoint()).eval();

        st.err_cov.push_back(corr.R[k] - A);
        st.A.push_back(std::move(A));
        st.filter.push_back(std::move(filt));
        st.Psi.push_back(std::move(Psi));
    }
    return st;
}

Eigen::VectorXcd estimate_channel(const EstimatorState& state, int k, const Eigen::VectorXcd& z) {
    return state.filter.at(k) * z;
}

Eigen::VectorXcd despread(const Eigen::MatrixXcd& pilot_block, const Eigen::VectorXcd& phi_k,
                          double q_k) {
    const int tau_p = static_cast<int>(phi_k.size());
    if (pilot_block.cols() != tau_p) throw std::invalid_argument("pilot block/pilot length mismatch");
    for (int j = 0; j < tau_p; ++j)
        if (std::abs(std::abs(phi_k(j)) - 1.0) > 1e-9)
            throw std::invalid_argument("pilot symbols must have unit modulus");
    return pilot_block * phi_k.conjugate() / (tau_p * std::sqrt(q_k));
}

Eigen::MatrixXcd dft_pilots(int K, int tau_p) {
    if (tau_p < K) throw std::invalid_argument("tau_p < K");
    Eigen::MatrixXcd phi(tau_p, K);
    const double w = 2.0 * std::numbers::pi / tau_p;
    for (int j = 0; j < tau_p; ++j)
        for (int k = 0; k < K; ++k) phi(j, k) = std::polar(1.0, w * j * k);
    return phi;
}

} // namespace adcalloc
