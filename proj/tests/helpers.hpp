// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "adcalloc/network.hpp"

namespace testutil {

inline adcalloc::NetworkConfig small_config(int M, int K,
                                            adcalloc::ChannelCase c = adcalloc::ChannelCase::CoCorrD1) {
    adcalloc::NetworkConfig cfg;
    cfg.M = M;
    cfg.K = K;
    cfg.chan_case = c;
    return cfg;
}

inline adcalloc::NetworkRealization small_net(int M, int K, std::uint64_t seed,
                                              adcalloc::ChannelCase c = adcalloc::ChannelCase::CoCorrD1) {
    return adcalloc::drop_network(small_config(M, K, c), seed);
}

inline Eigen::VectorXd const_zeta(int M, double z = 1.6) {
    return Eigen::VectorXd::Constant(M, z);
}

} // namespace testutil
