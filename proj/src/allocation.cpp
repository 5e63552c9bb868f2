// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace adcalloc {

Eigen::VectorXd undistorted_pilot_power(const std::vector<Eigen::VectorXd>& diagR,
                                        const Eigen::VectorXd& pilot_energy) {
    if (diagR.empty()) throw std::invalid_argument("no correlation diagonals");
    Eigen::VectorXd p_u = Eigen::VectorXd::Zero(diagR[0].size());
    for (std::size_t i = 0; i < diagR.size(); ++i)
        p_u += pilot_energy(static_cast<int>(i)) * diagR[i];
    return p_u;
}

PilotAllocation allocate_min_pilot_distortion(const Eigen::VectorXd& p_u,
                                              const Eigen::VectorXd& zeta, double b_tot) {
    const int M = static_cast<int>(p_u.size());
    if ((p_u.array() <= 0.0).any()) throw std::invalid_argument("p_u must be positive");
    if (zeta.size() != M) throw std::invalid_argument("zeta size mismatch");

    // log2 eps_m = (1/M)(-b_tot + sum log2 zeta + 1/2 sum log2 p_u) - 1/2 log2 p_m.
    const Eigen::ArrayXd log2_p = p_u.array().log() / std::numbers::ln2;
    const double common =
        (-b_tot + (zeta.array().log() / std::numbers::ln2).sum() + 0.5 * log2_p.sum()) / M;

    PilotAllocation out;
    out.eps.resize(M);
    out.bits.resize(M);
    for (int m = 0; m < M; ++m) {
        const double log2_eps = common - 0.5 * log2_p(m);
        out.eps(m) = std::exp2(log2_eps);
        out.bits(m) = std::log2(zeta(m)) - log2_eps;
    }
    return out;
}

KktReport verify_kkt(const Eigen::VectorXd& eps, const Eigen::VectorXd& p_u,
                     const Eigen::VectorXd& zeta, double b_tot, double tol) {
    const int M = static_cast<int>(eps.size());
    if ((eps.array() <= 0.0).any()) throw std::invalid_argument("eps must be positive");

    KktReport rep;
    double budget = 0.0;
    for (int m = 0; m < M; ++m) budget += std::log2(zeta(m) / eps(m));
    rep.budget_residual = budget - b_tot;

    // Stationarity: 2 eps_m p_m^u = lambda / (ln2 * eps_m) must hold with one lambda.
    Eigen::VectorXd lambda_cand(M);
    for (int m = 0; m < M; ++m)
        lambda_cand(m) = 2.0 * std::numbers::ln2 * eps(m) * eps(m) * p_u(m);
    rep.lambda = lambda_cand.mean();
    rep.lambda_spread =
        (lambda_cand.maxCoeff() - lambda_cand.minCoeff()) / std::max(rep.lambda, 1e-300);
    rep.comp_slack = rep.lambda * rep.budget_residual;

    // Budget must be active at the optimum, so the residual is checked both ways.
    rep.ok = rep.lambda >= 0.0 && std::abs(rep.budget_residual) <= tol &&
             rep.lambda_spread <= tol && std::abs(rep.comp_slack) <= tol * std::max(rep.lambda, 1.0);
    return rep;
}

Eigen::VectorXi round_to_integer_bits(const Eigen::VectorXd& b_op, int b_tot) {
    const int M = static_cast<int>(b_op.size());
    if (b_tot < M) throw std::invalid_argument("b_tot < M: cannot keep b_m >= 1");

    // Round half away from zero, then floor at 1.
    Eigen::VectorXi b(M);
    for (int m = 0; m < M; ++m)
        b(m) = std::max(1, static_cast<int>(std::llround(b_op(m))));

    auto sorted_indices = [&](bool ascending) {
        std::vector<int> idx(M);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int c) {
            return ascending ? b(a) < b(c) : b(a) > b(c);
        });
        return idx;
    };

    int n_diff = b_tot - b.sum();
    int guard = 0;
    while (n_diff != 0) {
        if (++guard > 4 * b_tot + 16)
            throw std::runtime_error("round_to_integer_bits: repair loop did not terminate");
        if (n_diff > 0) {
            auto idx = sorted_indices(true);
            for (int j = 0; j < std::min(n_diff, M); ++j) ++b(idx[j]);
        } else {
            auto idx = sorted_indices(false);
            int todo = std::min(-n_diff, M);
            int done = 0;
            for (int j = 0; j < M && done < todo; ++j) {
                if (b(idx[j]) > 1) {
                    --b(idx[j]);
                    ++done;
                }
            }
            if (done == 0) throw std::runtime_error("round_to_integer_bits: budget infeasible");
        }
        n_diff = b_tot - b.sum();
    }
    return b;
}

} // namespace adcalloc
