// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "adcalloc/estimation.hpp"
#include "adcalloc/impairments.hpp"
#include "adcalloc/network.hpp"

namespace adcalloc {

enum class CombinerKind { MR, RZF };

const char* to_string(CombinerKind c);
CombinerKind combiner_from_string(const std::string& s);

/// Effective SINR per UE with the denominator split into labeled components.
/// The Monte-Carlo path fills the aggregate components only (the three
/// distortion groups are a closed-form decomposition).
struct SinrReport {
    Eigen::VectorXd sinr;  ///< linear effective SINR
    Eigen::VectorXd se;    ///< (1 - tau_p/tau_c) log2(1 + SINR)

    Eigen::VectorXd numerator;
    Eigen::VectorXd self_distortion;
    Eigen::VectorXd interuser_distortion;    ///< distortion from inter-user interference
    Eigen::VectorXd additional_distortion;   ///< bilinear pilot-data cross term
    Eigen::VectorXd interference;            ///< includes channel-gain uncertainty
    Eigen::VectorXd noise;
    Eigen::VectorXd data_distortion;

    Eigen::VectorXd denominator_rel_stderr;  ///< Monte-Carlo only; 0 for closed form
    bool stderr_flagged = false;             ///< any denominator rel. stderr > 5%
};

/// Closed-form effective SINR for MR combining, evaluated term by term from
/// the estimator state (A_k = R_k Psi_k^{-1} R_k).
SinrReport sinr_mr_closed_form(const CorrelationSet& corr, const EstimatorState& state,
                               const ImpairmentProfile& profile, const Eigen::VectorXd& data_energy,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                               int tau_c);

/// Use-and-then-forget SINR estimated by Monte Carlo over joint draws of
/// channels, noise, and pilot/data distortion. Noise and data-distortion
/// moments are averaged conditionally on the combiner for variance reduction.
SinrReport sinr_uatf_monte_carlo(CombinerKind kind, const CorrelationSet& corr,
                                 const ImpairmentProfile& profile,
                                 const Eigen::VectorXd& data_energy,
                                 const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                                 int tau_c, int n_trials, std::uint64_t seed);

/// SE_k = (1 - tau_p/tau_c) log2(1 + sinr_k).
Eigen::VectorXd se_from_sinr(const Eigen::VectorXd& sinr, int tau_p, int tau_c);

/// Combining vectors for one channel realization given the estimates.
Eigen::MatrixXcd combine_vectors(CombinerKind kind, const Eigen::MatrixXcd& h_hat,
                                 const Eigen::VectorXd& data_energy, double sigma2);

} // namespace adcalloc
