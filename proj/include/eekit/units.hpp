// Unit conversions and physical-scale helpers. Everything downstream of the
// I/O boundary works in linear SI units (Hz, W, W/Hz, seconds, bits).
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace eekit {

inline constexpr double kLn2 = 0.69314718055994530942;

inline double db_to_linear(double x_db) {
    if (!std::isfinite(x_db))
        throw std::invalid_argument("db_to_linear: non-finite input");
    return std::pow(10.0, x_db / 10.0);
}

inline double linear_to_db(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("linear_to_db: input must be positive and finite");
    return 10.0 * std::log10(x);
}

// dBm/Hz -> W/Hz, e.g. -174 dBm/Hz thermal floor -> 3.981e-21 W/Hz
inline double dbm_per_hz_to_w_per_hz(double x_dbm_hz) {
    if (!std::isfinite(x_dbm_hz))
        throw std::invalid_argument("dbm_per_hz_to_w_per_hz: non-finite input");
    return std::pow(10.0, (x_dbm_hz - 30.0) / 10.0);
}

inline double noise_power(double b0_hz, double n0_w_per_hz) {
    if (!(b0_hz > 0.0) || !std::isfinite(b0_hz))
        throw std::invalid_argument("noise_power: bandwidth must be positive");
    if (!(n0_w_per_hz > 0.0) || !std::isfinite(n0_w_per_hz))
        throw std::invalid_argument("noise_power: noise density must be positive");
    return b0_hz * n0_w_per_hz;
}

} // namespace eekit
