// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/gp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace adcalloc {

Monomial Monomial::from_coeff(double c, const Eigen::VectorXd& expo) {
    if (!(c > 0.0)) throw std::invalid_argument("monomial coefficient must be positive");
    return Monomial{std::log(c), expo};
}

void Posynomial::add(double coeff, const Eigen::VectorXd& expo) {
    terms.push_back(Monomial::from_coeff(coeff, expo));
}

void Posynomial::add_log(double log_coeff, const Eigen::VectorXd& expo) {
    terms.push_back(Monomial{log_coeff, expo});
}

double Posynomial::eval_log(const Eigen::VectorXd& y) const {
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) vmax = std::max(vmax, t.eval_log(y));
    double s = 0.0;
    for (const auto& t : terms) s += std::exp(t.eval_log(y) - vmax);
    return vmax + std::log(s);
}

namespace {

// Smooth convex constraint g(z) <= 0 in the working variable z, which is the
// log-variable vector optionally extended by the phase-1 slack.
struct LseConstraint {
    const Posynomial* posy = nullptr;
    int dim = 0;          // working dimension
    bool slack = false;   // subtract z[dim-1]

    double value(const Eigen::VectorXd& z) const {
        const double v = posy->eval_log(z.head(posy->terms[0].expo.size()));
        return slack ? v - z(dim - 1) : v;
    }

    // value, gradient, Hessian of the log-sum-exp at z
    double value_grad_hess(const Eigen::VectorXd& z, Eigen::VectorXd& g,
                           Eigen::MatrixXd& H) const {
        const int n = static_cast<int>(posy->terms[0].expo.size());
        double vmax = -std::numeric_limits<double>::infinity();
        for (const auto& t : posy->terms) vmax = std::max(vmax, t.eval_log(z.head(n)));
        double wsum = 0.0;
        g.setZero(dim);
        H.setZero(dim, dim);
        Eigen::VectorXd gy = Eigen::VectorXd::Zero(n);
        Eigen::MatrixXd Hy = Eigen::MatrixXd::Zero(n, n);
        for (const auto& t : posy->terms) {
            const double w = std::exp(t.eval_log(z.head(n)) - vmax);
            wsum += w;
            gy += w * t.expo;
            Hy.noalias() += w * t.expo * t.expo.transpose();
        }
        gy /= wsum;
        Hy /= wsum;
        Hy.noalias() -= gy * gy.transpose();
        g.head(n) = gy;
        H.topLeftCorner(n, n) = Hy;
        double v = vmax + std::log(wsum);
        if (slack) {
            v -= z(dim - 1);
            g(dim - 1) -= 1.0;
        }
        return v;
    }
};

struct BarrierResult {
    Eigen::VectorXd z;
    Eigen::VectorXd nu;  // equality multipliers scaled by 1/t
    int newton_iters = 0;
    bool converged = true;
};

// Minimize t * c^T z - sum log(-g_j(z)) subject to E z = d, by damped Newton
// from a strictly feasible z0 satisfying the equalities. Z holds an
// orthonormal basis of null(E) so the step never drifts off the equality
// manifold, even when the barrier Hessian is badly conditioned near the
// boundary. The loop stops once the predicted decrease falls below the
// floating-point noise floor of the barrier value itself; past that point
// the computed Newton decrement is dominated by cancellation error.
BarrierResult center(const Eigen::VectorXd& c, const std::vector<LseConstraint>& cons,
                     const Eigen::MatrixXd& E, const Eigen::MatrixXd& Z, double t,
                     Eigen::VectorXd z, int max_newton,
                     const double* stop_below = nullptr, int stop_index = -1) {
    const int n = static_cast<int>(z.size());
    const int p = static_cast<int>(E.rows());
    BarrierResult res;
    Eigen::VectorXd g_j(n);
    Eigen::MatrixXd H_j(n, n);

    for (int it = 0; it < max_newton; ++it) {
        if (stop_below && stop_index >= 0 && z(stop_index) < *stop_below) break;

        Eigen::VectorXd grad = t * c;
        Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
        double psi = t * c.dot(z);
        bool ok = true;
        for (const auto& con : cons) {
            const double v = con.value_grad_hess(z, g_j, H_j);
            if (v >= 0.0) { ok = false; break; }
            psi -= std::log(-v);
            grad += g_j / (-v);
            hess += H_j / (-v) + g_j * g_j.transpose() / (v * v);
        }
        if (!ok) throw std::runtime_error("center: iterate left the feasible region");

        hess.diagonal().array() += 1e-12 * (1.0 + hess.diagonal().maxCoeff());

        Eigen::VectorXd dz(n);
        if (p == 0) {
            dz = -hess.ldlt().solve(grad);
        } else {
            Eigen::MatrixXd Hr = Z.transpose() * hess * Z;
            Hr.diagonal().array() += 1e-12 * (1.0 + Hr.diagonal().maxCoeff());
            dz.noalias() = -Z * Hr.ldlt().solve(Z.transpose() * grad);
            // multipliers from stationarity: E^T nu = -(grad + H dz)
            const Eigen::VectorXd r = -(grad + hess * dz);
            res.nu = (E * E.transpose()).ldlt().solve(E * r) / t;
        }
        ++res.newton_iters;

        const double decrement2 = -grad.dot(dz);
        // below this the predicted decrease is smaller than the rounding
        // noise in psi, so further Newton steps cannot make verified progress
        const double noise_floor = std::max(1e-16, 1e-13 * (1.0 + std::abs(psi)));
        if (decrement2 < noise_floor) break;

        // backtracking: stay strictly feasible, then Armijo
        double alpha = 1.0;
        for (int ls = 0; ls < 60; ++ls) {
            const Eigen::VectorXd zc = z + alpha * dz;
            bool feas = true;
            for (const auto& con : cons)
                if (con.value(zc) >= 0.0) { feas = false; break; }
            if (feas) {
                double psic = t * c.dot(zc);
                for (const auto& con : cons) psic -= std::log(-con.value(zc));
                if (psic <= psi - 0.25 * alpha * decrement2) break;
            }
            alpha *= 0.5;
            if (ls == 59) alpha = 0.0;
        }
        if (alpha == 0.0) break;
        z += alpha * dz;
        if (decrement2 < 1e-12) break;
    }
    res.z = z;
    return res;
}

// Orthonormal basis of null(E) (n x (n - rank)); identity when E is empty.
Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& E, int n) {
    if (E.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeFullV);
    const double thresh = 1e-12 * std::max(1.0, svd.singularValues()(0));
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > thresh) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

// Project z0 onto {E z = d} (minimum-norm correction).
Eigen::VectorXd project_equalities(const Eigen::MatrixXd& E, const Eigen::VectorXd& d,
                                   Eigen::VectorXd z0) {
    if (E.rows() == 0) return z0;
    Eigen::VectorXd r = d - E * z0;
    z0 += E.transpose() * (E * E.transpose()).ldlt().solve(r);
    return z0;
}

} // namespace

GpSolution solve_gp(const GpProblem& problem, double tol, int max_iter,
                    const Eigen::VectorXd* x0) {
    const int n = problem.n;
    if (problem.objective.expo.size() != n) throw std::invalid_argument("objective dimension");
    for (const auto& c : problem.constraints) {
        if (c.terms.empty()) throw std::invalid_argument("empty posynomial constraint");
        for (const auto& t : c.terms)
            if (t.expo.size() != n) throw std::invalid_argument("constraint dimension");
    }

    const int m = static_cast<int>(problem.constraints.size());
    Eigen::MatrixXd E(problem.equalities.size(), n);
    Eigen::VectorXd d(problem.equalities.size());
    for (std::size_t i = 0; i < problem.equalities.size(); ++i) {
        E.row(static_cast<int>(i)) = problem.equalities[i].expo.transpose();
        d(static_cast<int>(i)) = -problem.equalities[i].log_coeff;
    }

    GpSolution sol;
    sol.status = GpStatus::Infeasible;

    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    if (x0) {
        if (x0->size() != n) throw std::invalid_argument("x0 dimension");
        y = x0->array().log().matrix();
    }
    y = project_equalities(E, d, y);

    std::vector<LseConstraint> cons;
    cons.reserve(m);
    for (const auto& c : problem.constraints) cons.push_back({&c, n, false});

    auto feasible = [&](const Eigen::VectorXd& z) {
        for (const auto& c : cons)
            if (c.value(z) >= -1e-12) return false;
        return true;
    };

    int total_newton = 0;
    const int per_center = std::min(max_iter, 200);
    const Eigen::MatrixXd Z = null_space_basis(E, n);

    if (!feasible(y)) {
        // Phase 1: minimize s subject to f_j(y) - s <= 0 in variables (y, s).
        std::vector<LseConstraint> p1;
        p1.reserve(m);
        for (const auto& c : problem.constraints) p1.push_back({&c, n + 1, true});
        Eigen::MatrixXd E1(E.rows(), n + 1);
        if (E.rows() > 0) {
            E1.leftCols(n) = E;
            E1.col(n).setZero();
        }
        const Eigen::MatrixXd Z1 = null_space_basis(E1, n + 1);
        Eigen::VectorXd z(n + 1);
        z.head(n) = y;
        double smax = -std::numeric_limits<double>::infinity();
        for (const auto& c : cons) smax = std::max(smax, c.value(y));
        z(n) = smax + 1.0;

        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + 1);
        c1(n) = 1.0;
        const double stop = -1e-6;
        double t = 1.0;
        for (int outer = 0; outer < 60 && z(n) >= stop; ++outer) {
            BarrierResult r = center(c1, p1, E1, Z1, t, z, per_center, &stop, n);
            total_newton += r.newton_iters;
            z = r.z;
            t *= 10.0;
            if (static_cast<double>(m) / t < 1e-10 || total_newton > max_iter) break;
        }
        if (z(n) >= 0.0) {
            sol.status = GpStatus::Infeasible;
            sol.iterations = total_newton;
            return sol;
        }
        y = z.head(n);
    }

    const Eigen::VectorXd c = -problem.objective.expo;  // minimize -log objective

    double t = 1.0;
    Eigen::VectorXd nu;
    double gap = std::numeric_limits<double>::infinity();
    while (true) {
        BarrierResult r = center(c, cons, E, Z, t, y, per_center, nullptr, -1);
        total_newton += r.newton_iters;
        y = r.z;
        nu = r.nu;
        gap = static_cast<double>(std::max(m, 1)) / t;
        if (gap < tol || total_newton > max_iter) break;
        t *= 10.0;
    }

    sol.log_x = y;
    sol.x = y.array().exp().matrix();
    sol.log_objective = problem.objective.eval_log(y);
    sol.objective = std::exp(sol.log_objective);
    sol.iterations = total_newton;

    // KKT residual with lambda_j = 1 / (t * (-f_j)).
    Eigen::VectorXd resid = c;
    Eigen::VectorXd g(n);
    Eigen::MatrixXd H(n, n);
    bool strictly_feasible = true;
    for (const auto& con : cons) {
        const double v = con.value_grad_hess(y, g, H);
        if (v > 1e-8) strictly_feasible = false;
        if (v < 0.0) resid += g.head(n) / (t * (-v));
    }
    if (E.rows() > 0 && nu.size() == E.rows()) resid += E.transpose() * nu;
    sol.kkt_residual = resid.lpNorm<Eigen::Infinity>() / std::max(1.0, c.lpNorm<Eigen::Infinity>());

    sol.status = (gap < tol && strictly_feasible) ? GpStatus::Optimal : GpStatus::MaxIter;
    return sol;
}

std::string GpProblem::to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "gp " << n << "\n";
    if (!var_names.empty()) {
        os << "vars";
        for (const auto& v : var_names) os << " " << v;
        os << "\n";
    }
    auto put = [&](const char* tag, const Monomial& t) {
        os << tag << " " << t.log_coeff;
        for (int i = 0; i < t.expo.size(); ++i) os << " " << t.expo(i);
        os << "\n";
    };
    put("objective", objective);
    for (const auto& c : constraints) {
        os << "posy " << c.terms.size() << "\n";
        for (const auto& t : c.terms) put("term", t);
    }
    for (const auto& e : equalities) put("eq", e);
    return os.str();
}

GpProblem GpProblem::from_text(const std::string& text) {
    std::istringstream is(text);
    std::string tag;
    GpProblem p;
    auto read_mono = [&](Monomial& t) {
        is >> t.log_coeff;
        t.expo.resize(p.n);
        for (int i = 0; i < p.n; ++i) is >> t.expo(i);
    };
    while (is >> tag) {
        if (tag == "gp") {
            is >> p.n;
        } else if (tag == "vars") {
            std::string line;
            std::getline(is, line);
            std::istringstream ls(line);
            std::string v;
            while (ls >> v) p.var_names.push_back(v);
        } else if (tag == "objective") {
            read_mono(p.objective);
        } else if (tag == "posy") {
            std::size_t nt = 0;
            is >> nt;
            Posynomial posy;
            for (std::size_t j = 0; j < nt; ++j) {
                is >> tag;  // "term"
                Monomial t;
                read_mono(t);
                posy.terms.push_back(t);
            }
            p.constraints.push_back(std::move(posy));
        } else if (tag == "eq") {
            Monomial t;
            read_mono(t);
            p.equalities.push_back(t);
        } else {
            throw std::invalid_argument("GpProblem::from_text: unknown tag " + tag);
        }
    }
    return p;
}

} // namespace adcalloc
