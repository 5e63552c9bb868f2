// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "adcalloc/network.hpp"
#include "adcalloc/se.hpp"

namespace adcalloc {

/// Scalar quantizer for a unit-variance real Gaussian input: Lloyd-Max levels
/// for b <= 5, uniform with numerically optimized step for b > 5.
struct QuantizerCodebook {
    int bits = 0;
    Eigen::VectorXd thresholds;  ///< 2^b - 1 increasing cell boundaries
    Eigen::VectorXd levels;      ///< 2^b increasing reconstruction values
    double mse = 0.0;            ///< E{(x - Q(x))^2} for x ~ N(0,1)

    double quantize(double x) const;
};

QuantizerCodebook build_codebook(int bits);

/// Gaussian MSE of an arbitrary symmetric codebook, by per-cell analytic
/// integration. Shared with tests as the quadrature oracle path.
double gaussian_codebook_mse(const Eigen::VectorXd& thresholds, const Eigen::VectorXd& levels);

/// Per-antenna complex quantization: each antenna stream is scaled to unit
/// variance per real dimension, quantized, and rescaled.
struct QuantizedRx {
    Eigen::MatrixXcd y_q;        ///< M x n_symbols quantized block
    Eigen::VectorXd agc_scale;   ///< per-antenna std dev per real dimension
};

QuantizedRx quantize_block(const Eigen::MatrixXcd& block,
                           const std::vector<QuantizerCodebook>& codebooks,
                           const Eigen::VectorXd& agc_scale);

/// Statistical AGC: per-antenna received std dev per real dimension from
/// sqrt(([sum_i E{|x_i|^2} R_i]_mm + sigma^2) / 2).
Eigen::VectorXd statistical_agc(const CorrelationSet& corr, const Eigen::VectorXd& symbol_energies,
                                double sigma2);

/// Numerically estimated LMMSE filters from quantized pilot observations:
/// W_k = Ehat{h z^H} (Ehat{z z^H})^{-1} over joint channel/noise/quantization draws.
struct NumericLmmse {
    std::vector<Eigen::MatrixXcd> filter;
    std::vector<Eigen::MatrixXcd> err_cov;  ///< sample covariance of h - W z
};

NumericLmmse lmmse_numeric(const CorrelationSet& corr, const Eigen::VectorXi& bits,
                           const Eigen::VectorXd& pilot_energy, double sigma2, int tau_p,
                           int n_trials, std::uint64_t seed);

/// Full exact-quantization SE pipeline: quantized pilots -> numeric LMMSE ->
/// combiner -> sample moments -> SE. The validation path for the additive model.
struct ExactSeResult {
    Eigen::VectorXd se;
    Eigen::VectorXd sinr;
    bool stderr_flagged = false;
};

ExactSeResult se_exact_quantization(const NetworkRealization& net, const Eigen::VectorXi& bits,
                                    CombinerKind kind, const Eigen::VectorXd& data_energy,
                                    double sigma2, int tau_p, int tau_c, int n_trials,
                                    std::uint64_t seed);

/// CSV export (b, thresholds, levels, mse) for inspection.
void export_codebook_csv(const QuantizerCodebook& cb, const std::string& path);

} // namespace adcalloc
