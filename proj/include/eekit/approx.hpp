// Low-SNR machinery: the EE supremum E{lambda}/(N0 ln2), the sublinear gap
// below it, the beta sensitivity, and a finite-difference oracle for the
// derivatives of rho -> C_e(rho)/T at the origin.
//
// The gap carries two conventions. literal applies the moment coefficient in
// full,
//   Delta = rho_th/(N0 ln2) * ((beta+1) E{l^2} - beta E{l}^2)
// while corrected halves it, which is what a second-order Taylor expansion of
// -ln E{(1+rho l)^(-beta)} actually yields; the oracle below settles the
// question numerically. corrected is the default.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "eekit/channel.hpp"
#include "eekit/effcap.hpp"
#include "eekit/units.hpp"

namespace eekit {

enum class DeltaMode { literal, taylor_corrected };

struct ApproxInputs {
    double rho_th = 0.0;
    double beta = 0.0;
    double mean = 1.0;     // E{lambda}
    double second = 2.0;   // E{lambda^2}
    double variance = 1.0; // D(lambda)
    double n0 = 1.0;       // W/Hz
    DeltaMode mode = DeltaMode::taylor_corrected;
};

namespace detail {

inline void check_approx_inputs(const ApproxInputs& in) {
    if (!(in.rho_th > 0.0)) throw std::invalid_argument("approx: rho_th must be > 0");
    if (!(in.beta >= 0.0)) throw std::invalid_argument("approx: beta must be >= 0");
    if (!(in.n0 > 0.0)) throw std::invalid_argument("approx: N0 must be > 0");
    const double expect = in.second - in.mean * in.mean;
    if (std::abs(in.variance - expect) > 1e-6 * std::max(1.0, std::abs(in.second)))
        throw std::invalid_argument("approx: moments inconsistent (variance != second - mean^2)");
}

} // namespace detail

// EE supremum as the transmit power vanishes.
inline double ee_limit(double mean_gain, double n0) {
    if (!(n0 > 0.0)) throw std::invalid_argument("ee_limit: N0 must be > 0");
    return mean_gain / (n0 * kLn2);
}

inline double delta_sublinear(const ApproxInputs& in) {
    detail::check_approx_inputs(in);
    const double moment_term = (in.beta + 1.0) * in.second - in.beta * in.mean * in.mean;
    const double literal = in.rho_th / (in.n0 * kLn2) * moment_term;
    return in.mode == DeltaMode::literal ? literal : 0.5 * literal;
}

struct ApproxEe {
    double value = 0.0;       // bits/J
    bool out_of_range = false; // negative result: rho_th beyond the validity range
};

inline ApproxEe approx_ee(const ApproxInputs& in) {
    ApproxEe out;
    out.value = ee_limit(in.mean, in.n0) - delta_sublinear(in);
    out.out_of_range = out.value < 0.0;
    return out;
}

// d(EE)/d(beta) of the approximate expression; always <= 0 since the
// variance is nonnegative.
inline double ee_beta_derivative(double rho_th, double variance, double n0,
                                 DeltaMode mode = DeltaMode::taylor_corrected) {
    if (!(rho_th > 0.0)) throw std::invalid_argument("ee_beta_derivative: rho_th must be > 0");
    if (!(variance >= 0.0))
        throw std::invalid_argument("ee_beta_derivative: variance must be >= 0");
    if (!(n0 > 0.0)) throw std::invalid_argument("ee_beta_derivative: N0 must be > 0");
    const double literal = -rho_th / (n0 * kLn2) * variance;
    return mode == DeltaMode::literal ? literal : 0.5 * literal;
}

struct TaylorDerivatives {
    double first = 0.0;  // f'(0)
    double second = 0.0; // f''(0)
};

// One-sided finite differences on {h, 2h, 3h, 4h, 6h} with Richardson
// extrapolation. The evaluator must be deterministic in rho (pinned seed /
// common random numbers); inconsistent stencils are rejected with a hint to
// raise the sample count.
inline TaylorDerivatives taylor_oracle(const std::function<double(double)>& f, double h) {
    if (!(h >= 1e-5 && h <= 1e-2))
        throw std::invalid_argument("taylor_oracle: h must lie in [1e-5, 1e-2]");
    const double f0 = f(0.0);
    const double f1 = f(h), f2 = f(2 * h), f3 = f(3 * h), f4 = f(4 * h), f6 = f(6 * h);

    const double d1_h = (-3 * f0 + 4 * f1 - f2) / (2 * h);
    const double d1_2h = (-3 * f0 + 4 * f2 - f4) / (4 * h);
    const double d2_h = (2 * f0 - 5 * f1 + 4 * f2 - f3) / (h * h);
    const double d2_2h = (2 * f0 - 5 * f2 + 4 * f4 - f6) / (4 * h * h);

    TaylorDerivatives out;
    out.first = (4 * d1_h - d1_2h) / 3;
    out.second = (4 * d2_h - d2_2h) / 3;

    const double scale2 = std::max(std::abs(out.second), 1e-30);
    if (std::abs(d2_h - d2_2h) > 0.5 * scale2)
        throw std::runtime_error(
            "taylor_oracle: stencil noise exceeds tolerance; increase the sample count");
    return out;
}

// Convenience wrapper around the Monte Carlo effective capacity at fixed
// beta; sample i always comes from substream (seed, i), so every stencil
// point sees the same fading draws.
inline TaylorDerivatives taylor_oracle(const GainLaw& law, double beta, double frame_s,
                                       double b0_hz, std::int64_t samples, std::uint64_t seed,
                                       double h, int threads = 1) {
    if (!(beta > 0.0)) throw std::invalid_argument("taylor_oracle: beta must be > 0");
    const QosSpec qos = QosSpec::from_beta(beta, frame_s, b0_hz);
    const PowerPolicy policy = PowerPolicy::constant();
    auto f = [&](double rho) {
        return effective_capacity_mc(qos, rho, policy, law, frame_s, b0_hz, samples, seed,
                                     threads)
                   .value_bits /
               frame_s;
    };
    return taylor_oracle(f, h);
}

} // namespace eekit
