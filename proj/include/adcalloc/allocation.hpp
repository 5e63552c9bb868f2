// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace adcalloc {

/// Average undistorted received pilot power per antenna,
/// p_m^u = sum_i q_i [R_i]_mm.
Eigen::VectorXd undistorted_pilot_power(const std::vector<Eigen::VectorXd>& diagR,
                                        const Eigen::VectorXd& pilot_energy);

struct PilotAllocation {
    Eigen::VectorXd bits;  ///< real-valued optimum, sums to b_tot
    Eigen::VectorXd eps;   ///< corresponding distortion levels
};

/// Closed-form minimum-pilot-distortion allocation under a total bit budget.
/// Computed in the log domain; the budget is met with equality.
PilotAllocation allocate_min_pilot_distortion(const Eigen::VectorXd& p_u,
                                              const Eigen::VectorXd& zeta, double b_tot);

struct KktReport {
    bool ok = false;
    double budget_residual = 0.0;  ///< sum log2(zeta/eps) - b_tot
    double lambda = 0.0;           ///< recovered multiplier
    double lambda_spread = 0.0;    ///< relative spread of per-antenna candidates
    double comp_slack = 0.0;       ///< lambda * budget_residual
};

/// Checks stationarity (a single consistent multiplier), feasibility, and
/// complementary slackness of a candidate allocation.
KktReport verify_kkt(const Eigen::VectorXd& eps, const Eigen::VectorXd& p_u,
                     const Eigen::VectorXd& zeta, double b_tot, double tol = 1e-8);

/// Nearest-integer rounding with floor at 1 and iterative budget repair.
/// Requires b_tot >= M and sum(b_op) == b_tot.
Eigen::VectorXi round_to_integer_bits(const Eigen::VectorXd& b_op, int b_tot);

} // namespace adcalloc
