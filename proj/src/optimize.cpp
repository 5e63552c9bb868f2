// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/optimize.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "adcalloc/impairments.hpp"

namespace adcalloc {

double SinrGpData::eval_fd(int k, const Eigen::VectorXd& x, const Eigen::VectorXd& p) const {
    const int K = ues();
    double v = c0(k);
    for (int i = 0; i < K; ++i) {
        double fi = pcoef[k](i);
        fi += lin[k].col(i).dot(x);
        fi += x.transpose() * bilin[k * K + i] * x;
        v += p(i) * fi;
    }
    return v;
}

SinrGpData build_sinr_gp_data(const CorrelationSet& corr, const EstimatorState& state,
                              const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p) {
    const int M = corr.antennas();
    const int K = corr.ues();
    SinrGpData d;
    d.w.resize(K);
    d.c0.resize(K);
    d.lin.assign(K, Eigen::MatrixXd::Zero(M, K));
    d.pcoef.assign(K, Eigen::VectorXd::Zero(K));
    d.bilin.assign(static_cast<std::size_t>(K) * K, Eigen::MatrixXd());

    for (int k = 0; k < K; ++k) {
        const Eigen::MatrixXcd& A = state.A[k];
        const Eigen::MatrixXcd& B = state.filter[k];
        const double trA = A.real().trace();
        if (!(trA > 0.0)) throw std::invalid_argument("degenerate UE: tr(A_k) = 0");
        d.w(k) = trA * trA;
        d.c0(k) = sigma2 * trA;
        const Eigen::ArrayXd diagA = A.diagonal().real().array();
        const Eigen::ArrayXXd absB2 = B.array().abs2();

        for (int i = 0; i < K; ++i) {
            const double c = pilot_energy(i) / (tau_p * pilot_energy(k));
            const Eigen::ArrayXcd diagRiB =
                (corr.R[i].transpose().array() * B.array()).colwise().sum().transpose();
            Eigen::ArrayXd coef = c * diagRiB.abs2() + corr.diagR[i].array() * diagA;
            if (i == k) coef += diagA.square();
            d.lin[k].col(i) = coef.matrix();

            d.bilin[k * K + i] = (c * (absB2 * corr.R[i].array().abs2())).matrix();
            d.pcoef[k](i) = (corr.R[i].array() * A.transpose().array()).sum().real();
        }
        // posynomial validity
        if ((d.lin[k].array() < 0.0).any() || (d.pcoef[k].array() < 0.0).any())
            throw std::runtime_error("negative posynomial coefficient in f_k^d");
    }
    return d;
}

namespace {

Eigen::VectorXd unit_expo(int n, int i, double v = 1.0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(i) = v;
    return e;
}

// Emit the terms of f_k^d(x, p) times an extra monomial factor into `posy`.
// x_m maps to variable xvar(m); p_i to variable M-offset p_off + i.
void emit_fd_terms(Posynomial& posy, const SinrGpData& data, int k,
                   const std::function<int(int)>& xvar, bool tied, int p_off,
                   const Eigen::VectorXd& extra, double extra_log_coeff) {
    const int M = data.antennas();
    const int K = data.ues();
    for (int i = 0; i < K; ++i) {
        Eigen::VectorXd base = extra;
        base(p_off + i) += 1.0;
        if (data.pcoef[k](i) > 0.0)
            posy.add_log(std::log(data.pcoef[k](i)) + extra_log_coeff, base);
        const Eigen::MatrixXd& Q = data.bilin[k * K + i];
        if (tied) {
            // all x_m map to one variable, so equal-exponent terms merge
            const double clin = data.lin[k].col(i).sum();
            if (clin > 0.0) {
                Eigen::VectorXd e = base;
                e(xvar(0)) += 1.0;
                posy.add_log(std::log(clin) + extra_log_coeff, e);
            }
            const double cbil = Q.sum();
            if (cbil > 0.0) {
                Eigen::VectorXd e = base;
                e(xvar(0)) += 2.0;
                posy.add_log(std::log(cbil) + extra_log_coeff, e);
            }
            continue;
        }
        for (int m = 0; m < M; ++m) {
            const double c = data.lin[k](m, i);
            if (c > 0.0) {
                Eigen::VectorXd e = base;
                e(xvar(m)) += 1.0;
                posy.add_log(std::log(c) + extra_log_coeff, e);
            }
        }
        for (int m = 0; m < M; ++m) {
            for (int l = 0; l < M; ++l) {
                const double c = Q(m, l);
                if (c > 0.0) {
                    Eigen::VectorXd e = base;
                    e(xvar(m)) += 1.0;
                    e(xvar(l)) += 1.0;
                    posy.add_log(std::log(c) + extra_log_coeff, e);
                }
            }
        }
    }
    if (data.c0(k) > 0.0) posy.add_log(std::log(data.c0(k)) + extra_log_coeff, extra);
}

void add_upper_bounds(GpProblem& prob, const SinrGpModel& model, const ProfileBounds& bounds) {
    const int n = prob.n;
    for (int j = 0; j < model.n_x; ++j) {
        // x_j <= eps_max^2 (tied variable uses the tightest antenna bound)
        double emax2;
        if (model.n_x == model.M) {
            emax2 = bounds.eps_max(j) * bounds.eps_max(j);
        } else {
            emax2 = bounds.eps_max.minCoeff() * bounds.eps_max.minCoeff();
        }
        Posynomial b;
        b.add_log(-std::log(emax2), unit_expo(n, j));
        prob.constraints.push_back(std::move(b));
    }
    for (int i = 0; i < model.K; ++i) {
        Posynomial b;
        b.add_log(-std::log(bounds.p_max), unit_expo(n, model.n_x + i));
        prob.constraints.push_back(std::move(b));
    }
}

} // namespace

Eigen::VectorXd SinrGpModel::extract_x(const GpSolution& s) const {
    if (n_x == M) return s.x.head(M);
    return Eigen::VectorXd::Constant(M, s.x(0));
}

Eigen::VectorXd SinrGpModel::extract_p(const GpSolution& s) const {
    return s.x.segment(n_x, K);
}

SinrGpModel build_sinr_gp(const SinrGpData& data, const Eigen::VectorXd& zeta,
                          const ProfileBounds& bounds, SinrObjective objective, int b_tot) {
    const int M = data.antennas();
    const int K = data.ues();
    SinrGpModel model;
    model.M = M;
    model.K = K;
    model.n_x = M;
    model.objective = objective;
    GpProblem& prob = model.problem;
    // variables: x_0..x_{M-1}, p_0..p_{K-1}, then u_0..u_{K-1} (MaxProd) or t (MaxMin)
    prob.n = M + K + (objective == SinrObjective::MaxProd ? K : 1);
    const int n = prob.n;
    const int p_off = M;
    auto xvar = [](int m) { return m; };

    if (objective == SinrObjective::MaxProd) {
        const int u_off = M + K;
        // maximize prod_k p_k w_k / u_k, with f_k^d <= u_k
        Monomial obj;
        obj.expo = Eigen::VectorXd::Zero(n);
        obj.log_coeff = 0.0;
        for (int k = 0; k < K; ++k) {
            obj.log_coeff += std::log(data.w(k));
            obj.expo(p_off + k) += 1.0;
            obj.expo(u_off + k) -= 1.0;
        }
        prob.objective = obj;
        for (int k = 0; k < K; ++k) {
            Posynomial c;
            Eigen::VectorXd extra = unit_expo(n, u_off + k, -1.0);
            emit_fd_terms(c, data, k, xvar, model.n_x == 1, p_off, extra, 0.0);
            prob.constraints.push_back(std::move(c));
        }
    } else {
        const int t_var = M + K;
        Monomial obj;
        obj.expo = unit_expo(n, t_var);
        prob.objective = obj;
        for (int k = 0; k < K; ++k) {
            // t f_k^d / (p_k w_k) <= 1
            Posynomial c;
            Eigen::VectorXd extra = unit_expo(n, t_var);
            extra(p_off + k) -= 1.0;
            emit_fd_terms(c, data, k, xvar, model.n_x == 1, p_off, extra, -std::log(data.w(k)));
            prob.constraints.push_back(std::move(c));
        }
    }

    // ADC bit budget: prod_m zeta_m^2 x_m^{-1} <= 2^(2 b_tot)
    Posynomial budget;
    {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        double lc = -2.0 * b_tot * std::numbers::ln2;
        for (int m = 0; m < M; ++m) {
            e(m) = -1.0;
            lc += 2.0 * std::log(zeta(m));
        }
        budget.add_log(lc, e);
    }
    prob.constraints.push_back(std::move(budget));

    add_upper_bounds(prob, model, bounds);
    return model;
}

SinrGpModel build_power_constrained_gp(const SinrGpData& data, const Eigen::VectorXd& zeta,
                                       const ProfileBounds& bounds,
                                       const PowerConstraintSpec& spec, bool mixed) {
    const int M = data.antennas();
    const int K = data.ues();
    SinrGpModel model;
    model.M = M;
    model.K = K;
    model.n_x = mixed ? M : 1;
    model.objective = SinrObjective::MaxProd;
    GpProblem& prob = model.problem;
    prob.n = model.n_x + K + K;  // x, p, u
    const int n = prob.n;
    const int p_off = model.n_x;
    const int u_off = model.n_x + K;
    auto xvar = [&model](int m) { return model.n_x == 1 ? 0 : m; };

    Monomial obj;
    obj.expo = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < K; ++k) {
        obj.log_coeff += std::log(data.w(k));
        obj.expo(p_off + k) += 1.0;
        obj.expo(u_off + k) -= 1.0;
    }
    prob.objective = obj;
    for (int k = 0; k < K; ++k) {
        Posynomial c;
        Eigen::VectorXd extra = unit_expo(n, u_off + k, -1.0);
        emit_fd_terms(c, data, k, xvar, model.n_x == 1, p_off, extra, 0.0);
        prob.constraints.push_back(std::move(c));
    }

    // P_txd-adc / gamma <= 1: transmit-data term plus per-antenna ADC term
    // 2 D1 zeta_m eps_m^{-1} = 2 D1 zeta_m x_m^{-1/2}.
    const int tau_p = spec.tau_p > 0 ? spec.tau_p : K;
    const double tx_coef =
        (1.0 - static_cast<double>(tau_p) / spec.tau_c) * spec.bandwidth / spec.eta / spec.gamma_pc;
    Posynomial pw;
    for (int k = 0; k < K; ++k) pw.add_log(std::log(tx_coef), unit_expo(n, p_off + k));
    for (int m = 0; m < M; ++m)
        pw.add_log(std::log(2.0 * spec.D1 * zeta(m) / spec.gamma_pc), unit_expo(n, xvar(m), -0.5));
    prob.constraints.push_back(std::move(pw));

    add_upper_bounds(prob, model, bounds);
    return model;
}

PsiIterationResult iterate_psi(const CorrelationSet& corr, const Eigen::VectorXd& zeta,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                               double p_max, const PsiIterationConfig& cfg) {
    const int M = corr.antennas();
    const int K = corr.ues();
    ProfileBounds bounds;
    bounds.eps_max = zeta / 2.0;  // b_m >= 1
    bounds.p_max = p_max;

    // Initialization: equal allocation eps_m = zeta_m 2^(-b_tot/M); in power
    // mode, equal allocation sized so the ADC term uses half the budget.
    Eigen::VectorXd eps(M);
    if (cfg.power) {
        const double floor_eps = 4.0 * cfg.power->D1 * zeta.sum() / (M * cfg.power->gamma_pc);
        for (int m = 0; m < M; ++m)
            eps(m) = std::min(0.99 * bounds.eps_max(m),
                              std::max(floor_eps, 1e-6 * bounds.eps_max(m)));
    } else {
        if (cfg.b_tot <= M) throw std::invalid_argument("iterate_psi: b_tot must exceed M");
        eps = zeta * std::exp2(-static_cast<double>(cfg.b_tot) / M);
    }
    Eigen::VectorXd p = Eigen::VectorXd::Constant(K, p_max);

    PsiIterationResult res;
    res.eps = eps;
    res.data_energy = p;

    double prev_log_obj = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < cfg.max_outer; ++it) {
        const ImpairmentProfile profile = profile_from_eps(eps, zeta);
        const EstimatorState state = build_estimator(corr, profile, pilot_energy, sigma2, tau_p);
        const SinrGpData data = build_sinr_gp_data(corr, state, pilot_energy, sigma2, tau_p);

        SinrGpModel model = cfg.power
                                ? build_power_constrained_gp(data, zeta, bounds, *cfg.power,
                                                             cfg.mixed)
                                : build_sinr_gp(data, zeta, bounds, cfg.objective, cfg.b_tot);
        GpSolution sol = solve_gp(model.problem, cfg.gp_tol);
        if (sol.status == GpStatus::Infeasible)
            throw std::runtime_error("iterate_psi: GP infeasible");

        eps = model.extract_x(sol).cwiseSqrt();
        p = model.extract_p(sol);
        res.eps = eps;
        res.data_energy = p;
        res.iterations = it + 1;

        // Objective with the refreshed Psi (full eps dependence).
        const ImpairmentProfile prof2 = profile_from_eps(eps, zeta);
        const EstimatorState st2 = build_estimator(corr, prof2, pilot_energy, sigma2, tau_p);
        const SinrGpData d2 = build_sinr_gp_data(corr, st2, pilot_energy, sigma2, tau_p);
        const Eigen::VectorXd x = eps.cwiseAbs2();
        double log_obj;
        if (cfg.objective == SinrObjective::MaxProd || cfg.power) {
            log_obj = 0.0;
            for (int k = 0; k < K; ++k)
                log_obj += std::log(p(k) * d2.w(k) / d2.eval_fd(k, x, p));
        } else {
            log_obj = std::numeric_limits<double>::infinity();
            for (int k = 0; k < K; ++k)
                log_obj = std::min(log_obj, std::log(p(k) * d2.w(k) / d2.eval_fd(k, x, p)));
        }
        res.objective_trajectory.push_back(log_obj);

        if (it > 0) {
            if (log_obj < prev_log_obj - 1e-12) res.monotone = false;
            if (std::abs(log_obj - prev_log_obj) < cfg.rel_tol * std::max(1.0, std::abs(prev_log_obj))) {
                res.converged = true;
                break;
            }
        }
        prev_log_obj = log_obj;
    }
    return res;
}

} // namespace adcalloc
