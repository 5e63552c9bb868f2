// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/impairments.hpp"

#include <cmath>
#include <stdexcept>

namespace adcalloc {

ImpairmentProfile eps_from_bits(const Eigen::VectorXd& zeta, const Eigen::VectorXd& bits,
                                bool allow_any_zeta) {
    if (zeta.size() != bits.size()) throw std::invalid_argument("zeta/bits size mismatch");
    if (!allow_any_zeta) {
        for (int m = 0; m < zeta.size(); ++m)
            if (zeta(m) <= 1.0 || zeta(m) >= 2.0)
                throw std::invalid_argument("zeta outside (1,2); pass allow_any_zeta to override");
    }
    for (int m = 0; m < bits.size(); ++m)
        if (bits(m) <= 0.0) throw std::invalid_argument("bits must be positive");

    ImpairmentProfile p;
    p.zeta = zeta;
    p.bits = bits;
    p.eps = zeta.array() * Eigen::pow(2.0, -bits.array());
    return p;
}

ImpairmentProfile equal_bits_profile(const Eigen::VectorXd& zeta, double b_tot) {
    const double b = b_tot / static_cast<double>(zeta.size());
    return eps_from_bits(zeta, Eigen::VectorXd::Constant(zeta.size(), b));
}

Eigen::VectorXd bits_from_eps(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta) {
    if (eps.size() != zeta.size()) throw std::invalid_argument("eps/zeta size mismatch");
    Eigen::VectorXd b(eps.size());
    for (int m = 0; m < eps.size(); ++m) {
        if (eps(m) <= 0.0) throw std::invalid_argument("eps must be positive to invert");
        b(m) = std::log2(zeta(m) / eps(m));
    }
    return b;
}

ImpairmentProfile profile_from_eps(const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta) {
    ImpairmentProfile p;
    p.eps = eps;
    p.zeta = zeta;
    if ((eps.array() > 0.0).all()) p.bits = bits_from_eps(eps, zeta);
    return p;
}

Eigen::VectorXd received_energy_diag(const std::vector<Eigen::VectorXcd>& channels,
                                     const Eigen::VectorXd& symbol_energies) {
    if (channels.empty()) throw std::invalid_argument("no channels");
    if (static_cast<int>(channels.size()) != symbol_energies.size())
        throw std::invalid_argument("channels/energies size mismatch");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(channels[0].size());
    for (std::size_t i = 0; i < channels.size(); ++i)
        d += symbol_energies(static_cast<int>(i)) * channels[i].cwiseAbs2();
    return d;
}

Eigen::VectorXcd distortion_sample(const Eigen::VectorXd& eps, const Eigen::VectorXd& d_h,
                                   RngStream& rng) {
    if (eps.size() != d_h.size()) throw std::invalid_argument("eps/d_h size mismatch");
    Eigen::VectorXcd e(eps.size());
    for (int m = 0; m < eps.size(); ++m) e(m) = eps(m) * std::sqrt(d_h(m)) * rng.cgauss();
    return e;
}

} // namespace adcalloc
