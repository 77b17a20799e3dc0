// Resource planning: minimal channel/block counts that reach a rate target
// while every block stays inside the high-EE area, uniform power allocation,
// scheme comparison, and EE sweeps over the (N, M) grid.
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eekit/config.hpp"
#include "eekit/linkmodel.hpp"

namespace eekit {

enum class Scheme { frequency_only, spatial_only, two_dimension };

inline const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::frequency_only: return "frequency-only";
    case Scheme::spatial_only: return "spatial-only";
    case Scheme::two_dimension: return "two-dimension";
    }
    return "?";
}

struct AllocationPlan {
    Scheme scheme = Scheme::frequency_only;
    long n_freq = 0;
    long m_space = 0;
    double per_block_power_w = 0.0;
    double total_power_w = 0.0;
    double predicted_capacity_bps = 0.0;
    double predicted_ee = 0.0; // bits/J
    bool feasible = false;

    long blocks() const { return n_freq * m_space; }
};

namespace detail {

// Smallest c with c * per_block_rate >= rate; floating-point-robust around
// the exact-boundary case.
inline long min_block_count(double rate_bps, double per_block_rate) {
    long c = static_cast<long>(std::floor(rate_bps / per_block_rate));
    if (c < 1) c = 1;
    while (static_cast<double>(c - 1) * per_block_rate >= rate_bps && c > 1) --c;
    while (static_cast<double>(c) * per_block_rate < rate_bps) ++c;
    return c;
}

// Factor c blocks into N x M >= c minimizing max(N, M), frequency taking the
// larger share (N >= M), least total blocks for that shape.
inline std::pair<long, long> two_dim_factorization(long c) {
    long n = static_cast<long>(std::floor(std::sqrt(static_cast<double>(c))));
    if (n < 1) n = 1;
    while (n * n < c) ++n; // n = ceil(sqrt(c)), smallest admissible max-dimension
    const long m = (c + n - 1) / n;
    return {n, m};
}

} // namespace detail

// Least resources per scheme at threshold-SNR operation. Capacity per block
// is increasing in SNR, so running each block exactly at rho_th is optimal
// inside the area; max_blocks caps the available resource when set.
inline AllocationPlan min_resources(double rate_bps, double b0_hz, double n0_w_per_hz,
                                    double rho_th, Scheme scheme, double mean_gain = 1.0,
                                    std::optional<long> max_blocks = std::nullopt) {
    if (!(rate_bps > 0.0)) throw std::invalid_argument("min_resources: rate must be > 0");
    if (!(rho_th > 0.0)) throw std::invalid_argument("min_resources: rho_th must be > 0");
    if (!(mean_gain > 0.0)) throw std::invalid_argument("min_resources: mean gain must be > 0");

    const double per_block_rate = shannon_capacity(b0_hz, rho_th * mean_gain);
    const long c = detail::min_block_count(rate_bps, per_block_rate);

    AllocationPlan plan;
    plan.scheme = scheme;
    switch (scheme) {
    case Scheme::frequency_only:
        plan.n_freq = c;
        plan.m_space = 1;
        break;
    case Scheme::spatial_only:
        plan.n_freq = 1;
        plan.m_space = c;
        break;
    case Scheme::two_dimension: {
        auto [n, m] = detail::two_dim_factorization(c);
        plan.n_freq = n;
        plan.m_space = m;
        break;
    }
    }
    plan.feasible = !max_blocks || plan.blocks() <= *max_blocks;
    if (!plan.feasible) {
        plan.n_freq = plan.m_space = 0;
        return plan;
    }
    plan.per_block_power_w = rho_th * b0_hz * n0_w_per_hz;
    plan.total_power_w = plan.per_block_power_w * static_cast<double>(plan.blocks());
    plan.predicted_capacity_bps = per_block_rate * static_cast<double>(plan.blocks());
    plan.predicted_ee = plan.predicted_capacity_bps / plan.total_power_w;
    return plan;
}

// power[i][j] = PT / (N M) everywhere.
inline ResourceGrid allocate_uniform(double pt_w, int n_freq, int m_space, double b0_hz,
                                     double n0_w_per_hz,
                                     std::span<const double> gains = {}) {
    if (!(pt_w >= 0.0)) throw std::invalid_argument("allocate_uniform: power must be >= 0");
    ResourceGrid g = make_grid(n_freq, m_space, b0_hz, n0_w_per_hz);
    if (!gains.empty()) {
        if (gains.size() != g.blocks())
            throw std::invalid_argument("allocate_uniform: gain count does not match grid");
        std::copy(gains.begin(), gains.end(), g.gain.begin());
    }
    const double per = pt_w / static_cast<double>(g.blocks());
    std::fill(g.power.begin(), g.power.end(), per);
    return g;
}

struct SweepRow {
    int n_freq = 0;
    int m_space = 0;
    double per_block_snr = 0.0;
    double capacity_bps = 0.0;
    double ee = 0.0; // bits/J
};

// EE against both dimension counts at a fixed power budget, unit gains.
// Rows come out row-major with N outer.
inline std::vector<SweepRow> ee_vs_grid_sweep(double pt_w, std::span<const int> n_values,
                                              std::span<const int> m_values,
                                              const SystemConfig& cfg) {
    if (n_values.empty() || m_values.empty())
        throw std::invalid_argument("ee_vs_grid_sweep: empty range");
    if (!(pt_w > 0.0)) throw std::invalid_argument("ee_vs_grid_sweep: power must be > 0");
    std::vector<SweepRow> rows;
    rows.reserve(n_values.size() * m_values.size());
    const double noise = noise_power(cfg.B0, cfg.N0);
    for (int n : n_values)
        for (int m : m_values) {
            if (n < 1 || m < 1) throw std::invalid_argument("ee_vs_grid_sweep: counts must be >= 1");
            SweepRow r;
            r.n_freq = n;
            r.m_space = m;
            r.per_block_snr = pt_w / (static_cast<double>(n) * m * noise);
            r.capacity_bps = static_cast<double>(n) * m * shannon_capacity(cfg.B0, r.per_block_snr);
            r.ee = r.capacity_bps / pt_w;
            rows.push_back(r);
        }
    return rows;
}

// Reference values reported for this comparison in the source material; kept
// as annotations only, the computed plans are the formula-consistent ones.
struct ReferenceSchemeRow {
    const char* scheme;
    double rate_bps;
    double rho_th_db;
    long n_freq;
    long m_space;
    double ee; // bits/J
};

inline std::span<const ReferenceSchemeRow> reference_scheme_rows() {
    static constexpr ReferenceSchemeRow rows[] = {
        {"frequency-only", 5e9, -10.0, 1200, 0, 1.8e8},
        {"spatial-only", 5e9, -10.0, 0, 1024, 2.0e8},
        {"two-dimension", 5e9, -10.0, 100, 64, 2.3e8},
    };
    return rows;
}

struct SchemeComparison {
    AllocationPlan frequency_only;
    AllocationPlan spatial_only;
    AllocationPlan two_dimension;
};

inline SchemeComparison compare_schemes(double rate_bps, double rho_th, const SystemConfig& cfg,
                                        std::optional<long> max_blocks = std::nullopt) {
    SchemeComparison out;
    out.frequency_only =
        min_resources(rate_bps, cfg.B0, cfg.N0, rho_th, Scheme::frequency_only, 1.0, max_blocks);
    out.spatial_only =
        min_resources(rate_bps, cfg.B0, cfg.N0, rho_th, Scheme::spatial_only, 1.0, max_blocks);
    out.two_dimension =
        min_resources(rate_bps, cfg.B0, cfg.N0, rho_th, Scheme::two_dimension, 1.0, max_blocks);
    return out;
}

} // namespace eekit
