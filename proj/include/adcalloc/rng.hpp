// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace adcalloc {

/// Deterministic random stream with hierarchical derivation. A campaign holds
/// one master seed; per-drop and per-trial streams are derived by hashing the
/// (seed, path) tuple, so results do not depend on scheduling order.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(mix(seed)) {}

    /// Derive a child stream from a seed and a path of indices.
    static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix(seed);
        for (std::uint64_t p : path) s = mix(s ^ mix(p + 0x9e3779b97f4a7c15ULL));
        return RngStream(s);
    }

    double uniform() { return unif_(eng_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(eng_); }
    double gauss() { return norm_(eng_); }

    /// CN(0,1): unit-variance circularly symmetric complex Gaussian.
    std::complex<double> cgauss() {
        constexpr double inv_sqrt2 = 0.7071067811865475244;
        return {norm_(eng_) * inv_sqrt2, norm_(eng_) * inv_sqrt2};
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace adcalloc
