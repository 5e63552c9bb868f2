// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "adcalloc/rng.hpp"

namespace adcalloc {

enum class ChannelCase { CoCorrI, CoCorrD1, CoCorrDK, CellFree };

const char* to_string(ChannelCase c);
ChannelCase channel_case_from_string(const std::string& s);

/// Scenario geometry, pathloss, pilot and power-control parameters.
struct NetworkConfig {
    int M = 32;                   ///< BS antennas
    int K = 5;                    ///< UEs
    double side_length_km = 0.4;  ///< square side
    double min_dist_km = 0.01;    ///< minimum UE-antenna distance
    double alpha = 3.76;          ///< pathloss exponent
    double omega_db = 148.1;      ///< pathloss at 1 km [dB]
    double sigma_sh_db = 10.0;    ///< shadow fading std dev [dB]
    double sigma_ang_deg = 10.0;  ///< angular std dev of local scattering
    double sigma_lsf_db = 4.0;    ///< per-antenna LSF std dev [dB]
    ChannelCase chan_case = ChannelCase::CoCorrI;
    double qbar_over_sigma2 = 1.0;  ///< SNR control rho_bar / sigma^2
    double rho_max = 5e-9;          ///< max energy per symbol [J]
    double sigma2 = 1.9905e-20;     ///< noise energy per symbol [J]
    int tau_c = 200;                ///< coherence block length
    int tau_p = 0;                  ///< pilot length; 0 means "use K"

    int pilot_len() const { return tau_p > 0 ? tau_p : K; }
    void validate() const;  ///< throws std::invalid_argument on violations
};

/// Per-UE spatial correlation matrices with cached diagonals and gains.
struct CorrelationSet {
    std::vector<Eigen::MatrixXcd> R;   ///< K Hermitian PSD matrices, MxM
    std::vector<Eigen::VectorXd> diagR;
    Eigen::VectorXd beta_bar;          ///< tr(R_k)/M
    int psd_repairs = 0;               ///< count of eigenvalue clippings applied

    int antennas() const { return R.empty() ? 0 : static_cast<int>(R[0].rows()); }
    int ues() const { return static_cast<int>(R.size()); }
};

struct NetworkRealization {
    Eigen::MatrixXd ue_positions;       ///< K x 2 [km]
    Eigen::MatrixXd antenna_positions;  ///< M x 2 [km] (all equal when co-located)
    CorrelationSet correlation;
    Eigen::VectorXd pilot_energy;  ///< q_k [J/symbol]
    Eigen::VectorXd beta_bar;      ///< average channel gains
};

/// Per-(antenna,UE) LSF coefficients plus UE azimuths, as consumed by
/// build_correlation. drop_network fills this from the drawn geometry.
struct LargeScaleGeometry {
    Eigen::MatrixXd beta;    ///< M x K LSF coefficients beta_mk
    Eigen::VectorXd theta;   ///< K UE azimuths from array broadside [rad]
    double sigma_ang_deg = 10.0;
};

/// Uniform UE drop with rejection resampling, per-case antenna placement,
/// channel-inversion pilot power control, and correlation construction.
NetworkRealization drop_network(const NetworkConfig& cfg, std::uint64_t seed);

/// R_k = D_beta^{1/2} Rbar_k D_beta^{1/2}; Gaussian local scattering for the
/// co-located cases, identity Rbar for cell-free. PSD-projects if needed.
CorrelationSet build_correlation(ChannelCase chan_case, const LargeScaleGeometry& geo);

/// Unit-diagonal Gaussian local-scattering matrix for a half-wavelength ULA.
Eigen::MatrixXcd local_scattering(int M, double theta_rad, double sigma_ang_deg);

/// Draws h_k ~ CN(0, R_k) through a cached eigendecomposition factor.
class ChannelSampler {
  public:
    explicit ChannelSampler(const CorrelationSet& corr);
    Eigen::VectorXcd draw(int k, RngStream& rng) const;
    /// Draw all K channels into the provided matrix columns.
    void draw_all(Eigen::MatrixXcd& h, RngStream& rng) const;

  private:
    std::vector<Eigen::MatrixXcd> factor_;  ///< R_k^{1/2} via eigendecomposition
};

} // namespace adcalloc
