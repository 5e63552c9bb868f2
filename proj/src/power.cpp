// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/power.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adcalloc {

void PowerModel::validate() const {
    if (P_cst <= 0.0 || P_ue <= 0.0 || P_bsa <= 0.0 || P_cd <= 0.0)
        throw std::invalid_argument("circuit power terms must be positive");
    if (eta <= 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in (0, 1]");
    if (D1 <= 0.0 || bandwidth <= 0.0) throw std::invalid_argument("D1 and B_w must be positive");
    if (tau_c <= 0 || tau_p < 0 || tau_p > tau_c)
        throw std::invalid_argument("need 0 <= tau_p <= tau_c, tau_c > 0");
}

AdcPower adc_power(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta, double D1) {
    if (eps.size() != zeta.size()) throw std::invalid_argument("eps/zeta size mismatch");
    if ((eps.array() <= 0.0).any()) throw std::invalid_argument("eps must be positive");
    AdcPower out;
    out.per_antenna = D1 * (zeta.array() / eps.array()).matrix();
    out.total = 2.0 * out.per_antenna.sum();
    return out;
}

AdcPower adc_power_from_bits(const Eigen::VectorXd& bits, double D1) {
    if ((bits.array() < 1.0).any()) throw std::invalid_argument("bits must be >= 1");
    AdcPower out;
    out.per_antenna = D1 * (bits.array() * std::numbers::ln2).exp().matrix();
    out.total = 2.0 * out.per_antenna.sum();
    return out;
}

double total_tx_adc_power(const Eigen::VectorXd& data_energy, const Eigen::VectorXd& eps,
                          const Eigen::VectorXd& zeta, const PowerModel& model, int K) {
    model.validate();
    const int tau_p = model.tau_p > 0 ? model.tau_p : K;
    const double prelog = 1.0 - static_cast<double>(tau_p) / model.tau_c;
    const double tx = prelog * (model.bandwidth / model.eta) * data_energy.sum();
    return tx + adc_power(eps, zeta, model.D1).total;
}

double energy_efficiency(double se_sum, const Eigen::VectorXd& data_energy,
                         const Eigen::VectorXd& pilot_energy, const Eigen::VectorXd& eps,
                         const Eigen::VectorXd& zeta, const PowerModel& model, int M, int K) {
    model.validate();
    if (se_sum < 0.0) throw std::invalid_argument("SE sum must be nonnegative");
    const int tau_p = model.tau_p > 0 ? model.tau_p : K;
    const double P_pilot = (static_cast<double>(tau_p) / model.tau_c) *
                           (model.bandwidth / model.eta) * pilot_energy.sum();
    const double throughput = model.bandwidth * se_sum;
    const double denom = model.P_cst + model.P_ue * K + model.P_bsa * M + P_pilot +
                         total_tx_adc_power(data_energy, eps, zeta, model, K) +
                         model.P_cd * throughput;
    return throughput / denom;
}

} // namespace adcalloc
