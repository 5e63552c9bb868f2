// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace adcalloc {

namespace {

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// E{(x - c)^2 ; a <= x < b} for x ~ N(0,1), with +-inf allowed.
double cell_mse(double a, double b, double c) {
    const double pa = std::isinf(a) ? 0.0 : phi(a);
    const double pb = std::isinf(b) ? 0.0 : phi(b);
    const double Pa = std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : Phi(a);
    const double Pb = std::isinf(b) ? (b < 0 ? 0.0 : 1.0) : Phi(b);
    const double mass = Pb - Pa;
    const double m1 = pa - pb;
    const double m2 = mass - (std::isinf(b) ? 0.0 : b * pb) + (std::isinf(a) ? 0.0 : a * pa);
    return m2 - 2.0 * c * m1 + c * c * mass;
}

// Centroid of N(0,1) on [a, b).
double cell_centroid(double a, double b) {
    const double pa = std::isinf(a) ? 0.0 : phi(a);
    const double pb = std::isinf(b) ? 0.0 : phi(b);
    const double mass = (std::isinf(b) ? (b > 0 ? 1.0 : 0.0) : Phi(b)) -
                        (std::isinf(a) ? (a < 0 ? 0.0 : 1.0) : Phi(a));
    if (mass <= 0.0) return 0.5 * (a + b);
    return (pa - pb) / mass;
}

QuantizerCodebook lloyd_max(int bits) {
    const int L = 1 << bits;
    QuantizerCodebook cb;
    cb.bits = bits;
    cb.levels.resize(L);
    cb.thresholds.resize(L - 1);

    // Initialize at uniform Gaussian quantiles.
    for (int j = 0; j < L; ++j) {
        const double p = (j + 0.5) / L;
        // inverse normal CDF via bisection (only used for initialization)
        double lo = -10.0, hi = 10.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (Phi(mid) < p ? lo : hi) = mid;
        }
        cb.levels(j) = 0.5 * (lo + hi);
    }

    double residual = 1.0;
    for (int iter = 0; iter < 20000 && residual > 1e-12; ++iter) {
        for (int j = 0; j + 1 < L; ++j) cb.thresholds(j) = 0.5 * (cb.levels(j) + cb.levels(j + 1));
        residual = 0.0;
        for (int j = 0; j < L; ++j) {
            const double a = (j == 0) ? -INFINITY : cb.thresholds(j - 1);
            const double b = (j == L - 1) ? INFINITY : cb.thresholds(j);
            const double c = cell_centroid(a, b);
            residual = std::max(residual, std::abs(c - cb.levels(j)));
            cb.levels(j) = c;
        }
        // the optimal Gaussian codebook is odd-symmetric; enforce it so
        // rounding drift cannot accumulate into a lopsided fixed point
        for (int j = 0; j < L / 2; ++j) {
            const double v = 0.5 * (cb.levels(L - 1 - j) - cb.levels(j));
            cb.levels(j) = -v;
            cb.levels(L - 1 - j) = v;
        }
    }
    for (int j = 0; j + 1 < L; ++j) cb.thresholds(j) = 0.5 * (cb.levels(j) + cb.levels(j + 1));
    cb.mse = gaussian_codebook_mse(cb.thresholds, cb.levels);
    return cb;
}

QuantizerCodebook uniform_codebook(int bits, double step) {
    const int L = 1 << bits;
    QuantizerCodebook cb;
    cb.bits = bits;
    cb.levels.resize(L);
    cb.thresholds.resize(L - 1);
    for (int j = 0; j < L; ++j) cb.levels(j) = (j - (L - 1) / 2.0) * step;
    for (int j = 0; j + 1 < L; ++j) cb.thresholds(j) = 0.5 * (cb.levels(j) + cb.levels(j + 1));
    cb.mse = gaussian_codebook_mse(cb.thresholds, cb.levels);
    return cb;
}

QuantizerCodebook optimized_uniform(int bits) {
    // Golden-section search over the step size; the Gaussian MSE is unimodal.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.1 * 8.0 / (1 << bits);
    double hi = 20.0 / (1 << bits);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = uniform_codebook(bits, x1).mse;
    double f2 = uniform_codebook(bits, x2).mse;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = uniform_codebook(bits, x1).mse;
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = uniform_codebook(bits, x2).mse;
        }
    }
    return uniform_codebook(bits, 0.5 * (lo + hi));
}

} // namespace

double gaussian_codebook_mse(const Eigen::VectorXd& thresholds, const Eigen::VectorXd& levels) {
    const int L = static_cast<int>(levels.size());
    double mse = 0.0;
    for (int j = 0; j < L; ++j) {
        const double a = (j == 0) ? -INFINITY : thresholds(j - 1);
        const double b = (j == L - 1) ? INFINITY : thresholds(j);
        mse += cell_mse(a, b, levels(j));
    }
    return mse;
}

QuantizerCodebook build_codebook(int bits) {
    if (bits < 1) throw std::invalid_argument("bits must be >= 1");
    // Lloyd-Max levels through 8 bits keep the effective scaling constant of
    // the additive model inside its stated (1,2) range; optimized uniform
    // steps cannot achieve that beyond 6 bits and are used only above 8.
    return bits <= 8 ? lloyd_max(bits) : optimized_uniform(bits);
}

double QuantizerCodebook::quantize(double x) const {
    // thresholds are sorted; find the first threshold above x
    const double* begin = thresholds.data();
    const double* end = begin + thresholds.size();
    const auto idx = std::upper_bound(begin, end, x) - begin;
    return levels(static_cast<int>(idx));
}

Eigen::VectorXd statistical_agc(const CorrelationSet& corr, const Eigen::VectorXd& symbol_energies,
                                double sigma2) {
    Eigen::VectorXd var = Eigen::VectorXd::Constant(corr.antennas(), sigma2);
    for (int i = 0; i < corr.ues(); ++i) var += symbol_energies(i) * corr.diagR[i];
    return (var / 2.0).cwiseSqrt();
}

QuantizedRx quantize_block(const Eigen::MatrixXcd& block,
                           const std::vector<QuantizerCodebook>& codebooks,
                           const Eigen::VectorXd& agc_scale) {
    const int M = static_cast<int>(block.rows());
    if (static_cast<int>(codebooks.size()) != M || agc_scale.size() != M)
        throw std::invalid_argument("quantize_block: per-antenna input size mismatch");
    QuantizedRx out;
    out.agc_scale = agc_scale;
    out.y_q.resize(M, block.cols());
    for (int m = 0; m < M; ++m) {
        const double s = agc_scale(m);
        const auto& cb = codebooks[m];
        for (int j = 0; j < block.cols(); ++j) {
            const std::complex<double> y = block(m, j);
            out.y_q(m, j) = {s * cb.quantize(y.real() / s), s * cb.quantize(y.imag() / s)};
        }
    }
    return out;
}

namespace {

std::vector<QuantizerCodebook> codebooks_for(const Eigen::VectorXi& bits) {
    // Cache per distinct resolution; bit vectors repeat values heavily.
    std::vector<QuantizerCodebook> by_bits(32);
    std::vector<QuantizerCodebook> out;
    out.reserve(bits.size());
    for (int m = 0; m < bits.size(); ++m) {
        const int b = bits(m);
        if (b < 1 || b > 31) throw std::invalid_argument("bits out of range");
        if (by_bits[b].bits != b) by_bits[b] = build_codebook(b);
        out.push_back(by_bits[b]);
    }
    return out;
}

} // namespace

NumericLmmse lmmse_numeric(const CorrelationSet& corr, const Eigen::VectorXi& bits,
                           const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                           int n_trials, std::uint64_t seed) {
    if (n_trials < 10000) throw std::invalid_argument("lmmse_numeric: n_trials must be >= 1e4");
    const int M = corr.antennas();
    const int K = corr.ues();
    const ChannelSampler sampler(corr);
    const auto codebooks = codebooks_for(bits);
    const Eigen::VectorXd agc = statistical_agc(corr, pilot_energy, sigma2);
    const Eigen::MatrixXcd phi = dft_pilots(K, tau_p);

    std::vector<Eigen::MatrixXcd> chz(K, Eigen::MatrixXcd::Zero(M, M));
    std::vector<Eigen::MatrixXcd> czz(K, Eigen::MatrixXcd::Zero(M, M));

    Eigen::MatrixXcd h(M, K), Yp(M, tau_p);
    for (int t = 0; t < n_trials; ++t) {
        RngStream rng = RngStream::derive(seed, {0xface, static_cast<std::uint64_t>(t)});
        sampler.draw_all(h, rng);
        for (int j = 0; j < tau_p; ++j) {
            for (int m = 0; m < M; ++m) Yp(m, j) = std::sqrt(sigma2) * rng.cgauss();
            for (int i = 0; i < K; ++i)
                Yp.col(j) += std::sqrt(pilot_energy(i)) * phi(j, i) * h.col(i);
        }
        const QuantizedRx q = quantize_block(Yp, codebooks, agc);
        for (int k = 0; k < K; ++k) {
            const Eigen::VectorXcd z = despread(q.y_q, phi.col(k), pilot_energy(k));
            chz[k] += h.col(k) * z.adjoint();
            czz[k] += z * z.adjoint();
        }
    }

    NumericLmmse out;
    out.filter.reserve(K);
    out.err_cov.reserve(K);
    for (int k = 0; k < K; ++k) {
        chz[k] /= n_trials;
        czz[k] /= n_trials;
        Eigen::MatrixXcd C = 0.5 * (czz[k] + czz[k].adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
        if (es.eigenvalues().minCoeff() < 1e-12 * es.eigenvalues().maxCoeff())
            C.diagonal().array() += 1e-10 * C.real().trace() / M;
        Eigen::MatrixXcd W = C.ldlt().solve(chz[k].adjoint()).adjoint();
        // sample error covariance: R_k - W C_hz^H - C_hz W^H + W C_zz W^H
        Eigen::MatrixXcd E = corr.R[k] - W * chz[k].adjoint() - chz[k] * W.adjoint() +
                             W * C * W.adjoint();
        out.err_cov.push_back(0.5 * (E + E.adjoint()));
        out.filter.push_back(std::move(W));
    }
    return out;
}

ExactSeResult se_exact_quantization(const NetworkRealization& net, const Eigen::VectorXi& bits,
                                    CombinerKind kind, const Eigen::VectorXd& data_energy,
                                    double sigma2, int tau_p, int tau_c, int n_trials,
                                    std::uint64_t seed) {
    const CorrelationSet& corr = net.correlation;
    const int M = corr.antennas();
    const int K = corr.ues();
    const ChannelSampler sampler(corr);
    const auto codebooks = codebooks_for(bits);
    const Eigen::VectorXd agc_p = statistical_agc(corr, net.pilot_energy, sigma2);
    const Eigen::VectorXd agc_d = statistical_agc(corr, data_energy, sigma2);
    const Eigen::MatrixXcd phi = dft_pilots(K, tau_p);

    const NumericLmmse lmmse = lmmse_numeric(corr, bits, net.pilot_energy, sigma2, tau_p,
                                             std::max(10000, n_trials), seed + 1);

    Eigen::VectorXcd sum_a = Eigen::VectorXcd::Zero(K);  // E{shat_k s_k^*}
    Eigen::VectorXd sum_p = Eigen::VectorXd::Zero(K);    // E{|shat_k|^2}
    Eigen::VectorXd sum_p2 = Eigen::VectorXd::Zero(K);

    Eigen::MatrixXcd h(M, K), Yp(M, tau_p), h_hat(M, K);
    Eigen::VectorXcd s(K), yd(M);
    for (int t = 0; t < n_trials; ++t) {
        RngStream rng = RngStream::derive(seed, {0xdada, static_cast<std::uint64_t>(t)});
        sampler.draw_all(h, rng);

        // pilot phase
        for (int j = 0; j < tau_p; ++j) {
            for (int m = 0; m < M; ++m) Yp(m, j) = std::sqrt(sigma2) * rng.cgauss();
            for (int i = 0; i < K; ++i)
                Yp.col(j) += std::sqrt(net.pilot_energy(i)) * phi(j, i) * h.col(i);
        }
        const QuantizedRx qp = quantize_block(Yp, codebooks, agc_p);
        for (int k = 0; k < K; ++k)
            h_hat.col(k) = lmmse.filter[k] * despread(qp.y_q, phi.col(k), net.pilot_energy(k));

        // data phase (same channel realizations)
        for (int k = 0; k < K; ++k) s(k) = rng.cgauss();
        for (int m = 0; m < M; ++m) yd(m) = std::sqrt(sigma2) * rng.cgauss();
        for (int i = 0; i < K; ++i) yd += std::sqrt(data_energy(i)) * s(i) * h.col(i);
        const QuantizedRx qd = quantize_block(yd, codebooks, agc_d);

        const Eigen::MatrixXcd V = combine_vectors(kind, h_hat, data_energy, sigma2);
        for (int k = 0; k < K; ++k) {
            const std::complex<double> shat = V.col(k).dot(qd.y_q.col(0));
            sum_a(k) += shat * std::conj(s(k));
            const double p = std::norm(shat);
            sum_p(k) += p;
            sum_p2(k) += p * p;
        }
    }

    const double n = static_cast<double>(n_trials);
    ExactSeResult out;
    out.sinr.resize(K);
    for (int k = 0; k < K; ++k) {
        const std::complex<double> a = sum_a(k) / n;
        const double p2 = sum_p(k) / n;
        const double den = std::max(p2 - std::norm(a), 1e-300);
        out.sinr(k) = std::norm(a) / den;
        const double var = std::max(0.0, sum_p2(k) / n - p2 * p2);
        if (p2 > 0.0 && std::sqrt(var / n) / p2 > 0.05) out.stderr_flagged = true;
    }
    out.se = se_from_sinr(out.sinr, tau_p, tau_c);
    return out;
}

void export_codebook_csv(const QuantizerCodebook& cb, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "bits,mse\n" << cb.bits << "," << cb.mse << "\n";
    f << "index,threshold,level\n";
    for (int j = 0; j < cb.levels.size(); ++j) {
        f << j << ",";
        if (j < cb.thresholds.size())
            f << cb.thresholds(j);
        f << "," << cb.levels(j) << "\n";
    }
}

} // namespace adcalloc
