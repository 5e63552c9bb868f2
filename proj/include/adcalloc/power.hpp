// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace adcalloc {

/// Circuit and conversion power parameters, SI units throughout.
struct PowerModel {
    double P_cst = 10.0;      ///< fixed circuit power [W]
    double P_ue = 0.1;        ///< per-UE circuit power [W]
    double P_bsa = 0.05;      ///< per-BS-antenna circuit power [W]
    double P_cd = 1.15e-9;    ///< coding/decoding energy [J/bit] (1.15 J/Gbit)
    double eta = 0.39;        ///< power amplifier efficiency
    double D1 = 0.006;        ///< ADC Walden constant [W per conversion step]
    double bandwidth = 20e6;  ///< B_w [Hz]
    int tau_p = 0;            ///< 0 means "use K at evaluation time"
    int tau_c = 200;

    void validate() const;
};

/// Per-antenna ADC dissipation D1 * zeta_m / eps_m = D1 * 2^{b_m}; the total
/// carries a factor 2 for the I and Q converters.
struct AdcPower {
    Eigen::VectorXd per_antenna;  ///< [W], single converter each
    double total = 0.0;           ///< [W], both converters, all antennas
};

AdcPower adc_power(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta, double D1);
AdcPower adc_power_from_bits(const Eigen::VectorXd& bits, double D1);

/// Transmit-data power plus total ADC power, the two gamma_pc-constrained terms.
double total_tx_adc_power(const Eigen::VectorXd& data_energy, const Eigen::VectorXd& eps,
                          const Eigen::VectorXd& zeta, const PowerModel& model, int K);

/// Delivered bits per Joule across the full consumption model.
double energy_efficiency(double se_sum, const Eigen::VectorXd& data_energy,
                         const Eigen::VectorXd& pilot_energy, const Eigen::VectorXd& eps,
                         const Eigen::VectorXd& zeta, const PowerModel& model, int M, int K);

} // namespace adcalloc
