// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adcalloc/impairments.hpp"
#include "adcalloc/network.hpp"

namespace adcalloc {

/// LMMSE estimator quantities per UE: the observation covariance Psi_k, the
/// filter R_k Psi_k^{-1}, the error covariance, and A_k = R_k Psi_k^{-1} R_k.
struct EstimatorState {
    std::vector<Eigen::MatrixXcd> Psi;
    std::vector<Eigen::MatrixXcd> filter;   ///< R_k Psi_k^{-1}
    std::vector<Eigen::MatrixXcd> err_cov;  ///< R_k - R_k Psi_k^{-1} R_k
    std::vector<Eigen::MatrixXcd> A;        ///< R_k Psi_k^{-1} R_k
    Eigen::VectorXd cond;                   ///< condition numbers of Psi_k

    int ues() const { return static_cast<int>(Psi.size()); }
};

/// Psi_k = R_k + (1/(tau_p q_k)) (sigma^2 I + sum_i q_i D_eps D_{R_i} D_eps).
/// Fails if any Psi_k is numerically singular (cond > 1e14).
EstimatorState build_estimator(const CorrelationSet& corr, const ImpairmentProfile& profile,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p);

/// hhat_k = R_k Psi_k^{-1} z_k.
Eigen::VectorXcd estimate_channel(const EstimatorState& state, int k, const Eigen::VectorXcd& z);

/// De-spreading z_k = Y_p phi_k^* / (tau_p sqrt(q_k)). Rejects non-unit-modulus pilots.
Eigen::VectorXcd despread(const Eigen::MatrixXcd& pilot_block, const Eigen::VectorXcd& phi_k,
                          double q_k);

/// Mutually orthogonal unit-modulus pilots: columns of a DFT matrix, tau_p x K.
Eigen::MatrixXcd dft_pilots(int K, int tau_p);

} // namespace adcalloc
