// Deterministic capacity and energy-efficiency formulas, the resource-block
// grid, and high-EE-area membership checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "eekit/units.hpp"

namespace eekit {

inline double shannon_capacity(double b_hz, double rho) {
    if (!(b_hz >= 0.0)) throw std::invalid_argument("shannon_capacity: bandwidth must be >= 0");
    if (!(rho >= 0.0)) throw std::invalid_argument("shannon_capacity: SNR must be >= 0");
    return b_hz * std::log1p(rho) / kLn2;
}

// Sum over parallel spatial subchannels with uniform power split across the
// Ms transmit antennas.
inline double mimo_capacity(double rho_d, int Ms, std::span<const double> eigs, double b0_hz) {
    if (Ms < 1) throw std::invalid_argument("mimo_capacity: Ms must be >= 1");
    if (eigs.empty()) throw std::invalid_argument("mimo_capacity: no eigenvalues");
    if (!(rho_d >= 0.0)) throw std::invalid_argument("mimo_capacity: SNR must be >= 0");
    double total = 0.0;
    for (double lambda : eigs) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("mimo_capacity: negative eigenvalue");
        total += std::log1p(rho_d * lambda / Ms);
    }
    return b0_hz * total / kLn2;
}

// The N x M block grid. Block (i, j) pairs frequency channel i with spatial
// subchannel j; storage is row-major with i outer.
struct ResourceGrid {
    int n_freq = 1;
    int m_space = 1;
    double b0_hz = 0.0;
    double n0_w_per_hz = 0.0;
    std::vector<double> gain;  // lambda_j^i, dimensionless
    std::vector<double> power; // p_ij [W]

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_space) +
               static_cast<std::size_t>(j);
    }
    double snr(int i, int j) const { return power[index(i, j)] / (b0_hz * n0_w_per_hz); }
    std::size_t blocks() const { return gain.size(); }

    // Compensated sum; keeps the budget-conservation check honest for large grids.
    double power_sum() const {
        double sum = 0.0, comp = 0.0;
        for (double p : power) {
            double y = p - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
};

inline ResourceGrid make_grid(int n_freq, int m_space, double b0_hz, double n0_w_per_hz) {
    if (n_freq < 1 || m_space < 1)
        throw std::invalid_argument("make_grid: grid dimensions must be >= 1");
    ResourceGrid g;
    g.n_freq = n_freq;
    g.m_space = m_space;
    g.b0_hz = b0_hz;
    g.n0_w_per_hz = n0_w_per_hz;
    g.gain.assign(static_cast<std::size_t>(n_freq) * static_cast<std::size_t>(m_space), 1.0);
    g.power.assign(g.gain.size(), 0.0);
    return g;
}

inline double grid_capacity(const ResourceGrid& g) {
    const double noise = g.b0_hz * g.n0_w_per_hz;
    double total = 0.0;
    for (std::size_t k = 0; k < g.blocks(); ++k)
        total += std::log1p(g.power[k] / noise * g.gain[k]);
    return g.b0_hz * total / kLn2;
}

inline double energy_efficiency(double capacity_bps, double pt_w) {
    if (!(pt_w > 0.0))
        throw std::invalid_argument("energy_efficiency: transmit power must be > 0");
    return capacity_bps / pt_w;
}

// Shannon EE at transmit SNR rho: log2(1+rho) / (rho N0). Strictly decreasing
// in rho; its rho -> 0 supremum is 1 / (N0 ln 2).
inline double ee_of_snr(double rho, double n0_w_per_hz) {
    if (!(rho > 0.0)) throw std::invalid_argument("ee_of_snr: SNR must be > 0");
    if (!(n0_w_per_hz > 0.0)) throw std::invalid_argument("ee_of_snr: N0 must be > 0");
    return std::log1p(rho) / (kLn2 * rho * n0_w_per_hz);
}

// Two membership conventions: raw_snr tests the transmit-side ratio
// p/(B0 N0) alone, received_snr folds in the block gain. The received form is
// the default since the area is defined by what the receiver sees.
enum class SnrCheckMode { raw_snr, received_snr };

struct HighEeReport {
    std::vector<std::uint8_t> block_ok;
    bool all_ok = true;
};

// Boundary is inclusive; a relative guard keeps exact-threshold constructions
// from failing on the last rounding step.
inline bool high_ee_check(double snr, double gain, double rho_th,
                          SnrCheckMode mode = SnrCheckMode::received_snr) {
    if (!(rho_th > 0.0)) throw std::invalid_argument("high_ee_check: rho_th must be > 0");
    const double v = mode == SnrCheckMode::raw_snr ? snr : snr * gain;
    return v <= rho_th * (1.0 + 1e-12);
}

inline HighEeReport high_ee_check(const ResourceGrid& g, double rho_th,
                                  SnrCheckMode mode = SnrCheckMode::received_snr) {
    HighEeReport report;
    report.block_ok.resize(g.blocks());
    for (int i = 0; i < g.n_freq; ++i)
        for (int j = 0; j < g.m_space; ++j) {
            const bool ok = high_ee_check(g.snr(i, j), g.gain[g.index(i, j)], rho_th, mode);
            report.block_ok[g.index(i, j)] = ok ? 1 : 0;
            report.all_ok = report.all_ok && ok;
        }
    return report;
}

} // namespace eekit
