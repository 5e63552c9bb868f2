// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "adcalloc/rng.hpp"

namespace adcalloc {

/// Per-antenna additive hardware-distortion levels and their ADC mapping
/// eps_m = zeta_m * 2^(-b_m).
struct ImpairmentProfile {
    Eigen::VectorXd eps;                  ///< distortion levels, >= 0
    Eigen::VectorXd zeta;                 ///< ADC saturation constants, in (1,2)
    std::optional<Eigen::VectorXd> bits;  ///< resolutions, present when ADC-derived

    int antennas() const { return static_cast<int>(eps.size()); }
};

/// Build a profile from ADC constants and (real-valued) bit resolutions.
/// Rejects zeta outside (1,2) unless allow_any_zeta is set.
ImpairmentProfile eps_from_bits(const Eigen::VectorXd& zeta, const Eigen::VectorXd& bits,
                                bool allow_any_zeta = false);

/// Equal resolution b_tot/M on all antennas.
ImpairmentProfile equal_bits_profile(const Eigen::VectorXd& zeta, double b_tot);

/// Inverse mapping b_m = log2(zeta_m / eps_m).
Eigen::VectorXd bits_from_eps(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta);

/// Profile from given eps levels (bits filled in from the inverse mapping).
ImpairmentProfile profile_from_eps(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta);

/// Instantaneous received energy per antenna, [D_h]_mm = sum_i E{|x_i|^2} |[h_i]_m|^2.
Eigen::VectorXd received_energy_diag(const std::vector<Eigen::VectorXcd>& channels,
                                     const Eigen::VectorXd& symbol_energies);

/// One draw of the additive distortion e = D_eps D_h^{1/2} r, r ~ CN(0, I).
Eigen::VectorXcd distortion_sample(const Eigen::VectorXd& eps, const Eigen::VectorXd& d_h,
                                   RngStream& rng);

} // namespace adcalloc
