// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adcalloc/estimation.hpp"
#include "adcalloc/gp.hpp"
#include "adcalloc/network.hpp"

namespace adcalloc {

enum class SinrObjective { MaxProd, MaxMin };

/// Coefficient tables of the SINR denominator f_k^d(x, p) for fixed Psi_k,
/// with x_m = eps_m^2. All coefficients are nonnegative by construction.
struct SinrGpData {
    Eigen::VectorXd w;                    ///< w_k = tr(A_k)^2
    std::vector<Eigen::MatrixXd> lin;     ///< K tables, lin[k](m,i): coeff of p_i x_m
    std::vector<Eigen::MatrixXd> bilin;   ///< K*K tables, bilin[k*K+i](m,l): coeff of p_i x_m x_l
    std::vector<Eigen::VectorXd> pcoef;   ///< K tables, pcoef[k](i): coeff of p_i
    Eigen::VectorXd c0;                   ///< constant term sigma^2 tr(A_k)

    int ues() const { return static_cast<int>(w.size()); }
    int antennas() const { return lin.empty() ? 0 : static_cast<int>(lin[0].rows()); }

    /// Direct evaluation of f_k^d(x, p); used for cross-module consistency checks.
    double eval_fd(int k, const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;
};

SinrGpData build_sinr_gp_data(const CorrelationSet& corr, const EstimatorState& state,
                              const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p);

/// Variable layout of the emitted GP: x variables first, then p, then auxiliaries.
struct SinrGpModel {
    GpProblem problem;
    int M = 0;
    int K = 0;
    int n_x = 0;  ///< number of distinct x variables (1 when tied, M otherwise)
    SinrObjective objective = SinrObjective::MaxProd;

    Eigen::VectorXd extract_x(const GpSolution& s) const;  ///< length M, x_m = eps_m^2
    Eigen::VectorXd extract_p(const GpSolution& s) const;  ///< length K
};

struct ProfileBounds {
    Eigen::VectorXd eps_max;  ///< per-antenna upper bound on eps (b_m >= 1)
    double p_max = 0.0;       ///< per-UE data energy cap
};

/// Eq.-style SINR maximization under an ADC bit budget. MaxProd introduces one
/// auxiliary u_k per UE bounding f_k^d; MaxMin uses the epigraph variable t.
SinrGpModel build_sinr_gp(const SinrGpData& data, const Eigen::VectorXd& zeta,
                          const ProfileBounds& bounds, SinrObjective objective, int b_tot);

struct PowerConstraintSpec {
    double gamma_pc = 10.0;   ///< max power [W]
    double D1 = 0.006;        ///< Walden constant [W per conversion step]
    double eta = 0.39;        ///< amplifier efficiency
    double bandwidth = 20e6;  ///< B_w [Hz]
    int tau_p = 0;
    int tau_c = 200;
};

/// Max-prod SINR with the bit budget replaced by the total transmit + ADC
/// power constraint. mixed=false ties all x_m to one variable (equal-ADC).
SinrGpModel build_power_constrained_gp(const SinrGpData& data, const Eigen::VectorXd& zeta,
                                       const ProfileBounds& bounds,
                                       const PowerConstraintSpec& spec, bool mixed);

struct PsiIterationResult {
    Eigen::VectorXd eps;
    Eigen::VectorXd data_energy;
    std::vector<double> objective_trajectory;  ///< product of closed-form SINRs per iteration
    int iterations = 0;
    bool converged = false;
    bool monotone = true;  ///< objective never decreased across outer iterations
};

struct PsiIterationConfig {
    SinrObjective objective = SinrObjective::MaxProd;
    int b_tot = 0;                 ///< bit budget (budget mode)
    const PowerConstraintSpec* power = nullptr;  ///< power mode when non-null
    bool mixed = true;             ///< only meaningful in power mode
    double rel_tol = 1e-6;
    int max_outer = 10;
    double gp_tol = 1e-8;
};

/// Iterative update of Psi_k: solve the GP with Psi fixed, rebuild Psi from
/// the optimal eps, repeat until the objective stabilizes.
PsiIterationResult iterate_psi(const CorrelationSet& corr, const Eigen::VectorXd& zeta,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                               double p_max, const PsiIterationConfig& cfg);

} // namespace adcalloc
