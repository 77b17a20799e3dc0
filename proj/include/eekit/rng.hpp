// Counter-based random substreams. The generator state for sample index i is
// a pure function of (seed, i), so workers may partition indices arbitrarily
// and still reproduce a serial run bit for bit.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace eekit {

namespace detail {

// SplitMix64 finalizer; bijective on uint64.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Labels carve independent seed spaces out of one user seed (per block, per
// antenna configuration, ...). Injective in the label for a fixed seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
    return detail::mix64(detail::mix64(seed) ^ detail::mix64(label ^ 0xD1B54A32D192ED03ULL));
}

class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t stream)
        : state_(detail::mix64(detail::mix64(seed) ^ detail::mix64(stream))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never returns 0 so log() stays finite.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        auto [z0, z1] = normal_pair();
        spare_ = z1;
        has_spare_ = true;
        return z0;
    }

    // Circularly symmetric complex Gaussian, unit variance: |h|^2 ~ Exp(1).
    std::complex<double> cgauss() {
        auto [z0, z1] = normal_pair();
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        return {z0 * inv_sqrt2, z1 * inv_sqrt2};
    }

    double exponential() { return -std::log(uniform01()); }

private:
    std::pair<double, double> normal_pair() {
        const double u1 = uniform01();
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53; // [0,1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.28318530717958647692 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace eekit
