// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace adcalloc {

/// c * prod_j v_j^{a_j} with c > 0, stored through log c for overflow safety.
struct Monomial {
    double log_coeff = 0.0;
    Eigen::VectorXd expo;

    static Monomial from_coeff(double c, const Eigen::VectorXd& expo);
    double eval_log(const Eigen::VectorXd& y) const { return log_coeff + expo.dot(y); }
};

/// Sum of positive-coefficient monomials over positive variables.
struct Posynomial {
    std::vector<Monomial> terms;

    void add(double coeff, const Eigen::VectorXd& expo);
    void add_log(double log_coeff, const Eigen::VectorXd& expo);
    /// log of the posynomial value at y = log(v), via max-subtracted log-sum-exp.
    double eval_log(const Eigen::VectorXd& y) const;
    bool is_monomial() const { return terms.size() == 1; }
};

/// maximize (monomial objective) s.t. posynomial_j <= 1, monomial equalities = 1.
struct GpProblem {
    int n = 0;
    Monomial objective;
    std::vector<Posynomial> constraints;
    std::vector<Monomial> equalities;
    std::vector<std::string> var_names;  ///< optional, for serialization

    std::string to_text() const;
    static GpProblem from_text(const std::string& text);
};

enum class GpStatus { Optimal, MaxIter, Infeasible };

struct GpSolution {
    GpStatus status = GpStatus::Infeasible;
    Eigen::VectorXd x;          ///< positive variable values
    Eigen::VectorXd log_x;
    double objective = 0.0;     ///< objective monomial value (may under/overflow)
    double log_objective = 0.0;
    double kkt_residual = 0.0;
    int iterations = 0;         ///< Newton iterations across all centering steps
};

/// Primal log-barrier interior point in the log-variable convex form, with a
/// phase-1 feasibility bootstrap when no strictly feasible start is supplied.
GpSolution solve_gp(const GpProblem& problem, double tol = 1e-8, int max_iter = 2000,
                    const Eigen::VectorXd* x0 = nullptr);

} // namespace adcalloc
