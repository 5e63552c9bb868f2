// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/se.hpp"

#include <cmath>
#include <stdexcept>

namespace adcalloc {

const char* to_string(CombinerKind c) { return c == CombinerKind::MR ? "MR" : "RZF"; }

CombinerKind combiner_from_string(const std::string& s) {
    if (s == "MR") return CombinerKind::MR;
    if (s == "RZF") return CombinerKind::RZF;
    throw std::invalid_argument("unknown combiner: " + s);
}

Eigen::VectorXd se_from_sinr(const Eigen::VectorXd& sinr, int tau_p, int tau_c) {
    if (tau_p <= 0 || tau_p >= tau_c) throw std::invalid_argument("need 0 < tau_p < tau_c");
    const double prelog = 1.0 - static_cast<double>(tau_p) / tau_c;
    return prelog * (1.0 + sinr.array()).log().matrix() / std::numbers::ln2;
}

SinrReport sinr_mr_closed_form(const CorrelationSet& corr, const EstimatorState& state,
                               const ImpairmentProfile& profile, const Eigen::VectorXd& data_energy,
                               const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                               int tau_c) {
    const int M = corr.antennas();
    const int K = corr.ues();
    const Eigen::ArrayXd eps2 = profile.eps.array().square();

    SinrReport rep;
    rep.sinr.resize(K);
    rep.numerator.resize(K);
    rep.self_distortion.resize(K);
    rep.interuser_distortion.resize(K);
    rep.additional_distortion.resize(K);
    rep.interference.resize(K);
    rep.noise.resize(K);
    rep.data_distortion.resize(K);
    rep.denominator_rel_stderr = Eigen::VectorXd::Zero(K);

    // sum_i p_i R_i for the interference trace
    Eigen::MatrixXcd sumR = Eigen::MatrixXcd::Zero(M, M);
    for (int i = 0; i < K; ++i) sumR += data_energy(i) * corr.R[i];

    for (int k = 0; k < K; ++k) {
        const Eigen::MatrixXcd& A = state.A[k];       // R_k Psi_k^{-1} R_k
        const Eigen::MatrixXcd& B = state.filter[k];  // R_k Psi_k^{-1}
        const double trA = A.real().trace();
        const Eigen::ArrayXd diagA = A.diagonal().real().array();

        rep.numerator(k) = data_energy(k) * trA * trA;

        rep.self_distortion(k) = data_energy(k) * (eps2 * diagA.square()).sum();

        double interuser = 0.0;
        double additional = 0.0;
        double data_dist = 0.0;
        for (int i = 0; i < K; ++i) {
            const double c = data_energy(i) * pilot_energy(i) / (tau_p * pilot_energy(k));
            // diag(R_i R_k Psi_k^{-1}): [R_i B]_mm = row_m(R_i) . col_m(B)
            const Eigen::ArrayXcd diagRiB =
                (corr.R[i].transpose().array() * B.array()).colwise().sum().transpose();
            interuser += c * (eps2 * diagRiB.abs2()).sum();

            // eps^T ( abs(B)^2 o abs(R_i)^2 ) eps with x_m = eps_m^2
            const Eigen::ArrayXXd W = B.array().abs2() * corr.R[i].array().abs2();
            additional += c * (eps2.matrix().transpose() * W.matrix() * eps2.matrix())(0, 0);

            data_dist += data_energy(i) * (eps2 * corr.diagR[i].array() * diagA).sum();
        }
        rep.interuser_distortion(k) = interuser;
        rep.additional_distortion(k) = additional;
        rep.data_distortion(k) = data_dist;

        rep.interference(k) = (sumR.array() * A.transpose().array()).sum().real();
        rep.noise(k) = sigma2 * trA;

        const double den = rep.self_distortion(k) + interuser + additional +
                           rep.interference(k) + rep.noise(k) + data_dist;
        rep.sinr(k) = rep.numerator(k) / den;
    }
    rep.se = se_from_sinr(rep.sinr, tau_p, tau_c);
    return rep;
}

Eigen::MatrixXcd combine_vectors(CombinerKind kind, const Eigen::MatrixXcd& h_hat,
                                 const Eigen::VectorXd& data_energy, double sigma2) {
    if (kind == CombinerKind::MR) return h_hat;
    const int M = static_cast<int>(h_hat.rows());
    const int K = static_cast<int>(h_hat.cols());
    Eigen::MatrixXcd G = sigma2 * Eigen::MatrixXcd::Identity(M, M);
    for (int i = 0; i < K; ++i) G += data_energy(i) * h_hat.col(i) * h_hat.col(i).adjoint();
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(G);
    Eigen::MatrixXcd V = ldlt.solve(h_hat);
    for (int k = 0; k < K; ++k) V.col(k) *= data_energy(k);
    return V;
}

SinrReport sinr_uatf_monte_carlo(CombinerKind kind, const CorrelationSet& corr,
                                 const ImpairmentProfile& profile,
                                 const Eigen::VectorXd& data_energy,
                                 const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                                 int tau_c, int n_trials, std::uint64_t seed) {
    if (n_trials < 1000) throw std::invalid_argument("n_trials must be >= 1e3");
    const int M = corr.antennas();
    const int K = corr.ues();
    const ChannelSampler sampler(corr);
    EstimatorState state = build_estimator(corr, profile, pilot_energy, sigma2, tau_p);

    const Eigen::ArrayXd eps = profile.eps.array();

    // Streaming accumulators (mean and sum of squares for standard errors).
    Eigen::VectorXcd sum_g = Eigen::VectorXcd::Zero(K);          // v_k^H h_k
    Eigen::MatrixXd sum_s = Eigen::MatrixXd::Zero(K, K);         // |v_k^H h_i|^2
    Eigen::MatrixXd sum_s2 = Eigen::MatrixXd::Zero(K, K);
    Eigen::VectorXd sum_noise = Eigen::VectorXd::Zero(K);        // sigma^2 ||v_k||^2
    Eigen::VectorXd sum_noise2 = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd sum_dist = Eigen::VectorXd::Zero(K);         // v^H D_eps^2 D_h^d v
    Eigen::VectorXd sum_dist2 = Eigen::VectorXd::Zero(K);

    Eigen::MatrixXcd h(M, K), h_hat(M, K);
    for (int t = 0; t < n_trials; ++t) {
        RngStream rng = RngStream::derive(seed, {static_cast<std::uint64_t>(t)});
        sampler.draw_all(h, rng);

        // De-spread pilot observation per UE (direct statistical equivalent).
        Eigen::ArrayXd dhp = Eigen::ArrayXd::Zero(M);
        for (int i = 0; i < K; ++i) dhp += pilot_energy(i) * h.col(i).cwiseAbs2().array();
        const Eigen::ArrayXd dist_std = eps * dhp.sqrt();
        for (int k = 0; k < K; ++k) {
            const double c = 1.0 / std::sqrt(tau_p * pilot_energy(k));
            Eigen::VectorXcd z = h.col(k);
            for (int m = 0; m < M; ++m)
                z(m) += c * (std::sqrt(sigma2) * rng.cgauss() + dist_std(m) * rng.cgauss());
            h_hat.col(k) = state.filter[k] * z;
        }

        Eigen::MatrixXcd V = combine_vectors(kind, h_hat, data_energy, sigma2);

        Eigen::ArrayXd dhd = Eigen::ArrayXd::Zero(M);
        for (int i = 0; i < K; ++i) dhd += data_energy(i) * h.col(i).cwiseAbs2().array();
        const Eigen::ArrayXd dist_var = eps.square() * dhd;

        for (int k = 0; k < K; ++k) {
            const Eigen::VectorXcd& v = V.col(k);
            sum_g(k) += v.dot(h.col(k));
            for (int i = 0; i < K; ++i) {
                const double s = std::norm(v.dot(h.col(i)));
                sum_s(k, i) += s;
                sum_s2(k, i) += s * s;
            }
            const double nz = sigma2 * v.squaredNorm();
            sum_noise(k) += nz;
            sum_noise2(k) += nz * nz;
            const double dd = (v.cwiseAbs2().array() * dist_var).sum();
            sum_dist(k) += dd;
            sum_dist2(k) += dd * dd;
        }
    }

    const double n = static_cast<double>(n_trials);
    auto rel_stderr = [n](double sum, double sumsq) {
        const double mean = sum / n;
        const double var = std::max(0.0, sumsq / n - mean * mean);
        return mean > 0.0 ? std::sqrt(var / n) / mean : 0.0;
    };

    SinrReport rep;
    rep.sinr.resize(K);
    rep.numerator.resize(K);
    rep.interference.resize(K);
    rep.noise.resize(K);
    rep.data_distortion.resize(K);
    rep.self_distortion = Eigen::VectorXd::Zero(K);
    rep.interuser_distortion = Eigen::VectorXd::Zero(K);
    rep.additional_distortion = Eigen::VectorXd::Zero(K);
    rep.denominator_rel_stderr.resize(K);

    for (int k = 0; k < K; ++k) {
        const std::complex<double> g = sum_g(k) / n;
        const double num = std::norm(g) * data_energy(k);
        double interf = 0.0;
        double worst_se = 0.0;
        for (int i = 0; i < K; ++i) {
            interf += data_energy(i) * sum_s(k, i) / n;
            worst_se = std::max(worst_se, rel_stderr(sum_s(k, i), sum_s2(k, i)));
        }
        interf -= num;  // channel gain uncertainty folded in, per the bound's algebra
        const double noise = sum_noise(k) / n;
        const double dist = sum_dist(k) / n;
        worst_se = std::max(worst_se, rel_stderr(sum_noise(k), sum_noise2(k)));
        worst_se = std::max(worst_se, rel_stderr(sum_dist(k), sum_dist2(k)));

        rep.numerator(k) = num;
        rep.interference(k) = std::max(0.0, interf);
        rep.noise(k) = noise;
        rep.data_distortion(k) = dist;
        rep.denominator_rel_stderr(k) = worst_se;
        if (worst_se > 0.05) rep.stderr_flagged = true;
        rep.sinr(k) = num / (rep.interference(k) + noise + dist);
    }
    rep.se = se_from_sinr(rep.sinr, tau_p, tau_c);
    return rep;
}

} // namespace adcalloc
