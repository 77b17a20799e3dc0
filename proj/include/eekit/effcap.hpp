// Effective capacity under a statistical QoS exponent, Monte Carlo over
// fading, and QoS-constrained energy efficiency of a block grid.
//
// For frame rate r = T B0 log2(1 + mu rho lambda) the effective capacity is
//   C_e(theta) = -(1/theta) ln E{ exp(-theta r) }
// and with beta = theta T B0 / ln2 the expectation becomes
// E{ (1 + mu rho lambda)^(-beta) }. The log-mean-exp is evaluated with a
// running max shift so large beta never underflows.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eekit/channel.hpp"
#include "eekit/config.hpp"
#include "eekit/linkmodel.hpp"
#include "eekit/parallel.hpp"
#include "eekit/rng.hpp"
#include "eekit/units.hpp"

namespace eekit {

inline double beta_of(double theta, double frame_s, double b0_hz) {
    if (!(theta >= 0.0)) throw std::invalid_argument("beta_of: theta must be >= 0");
    if (!(frame_s > 0.0) || !(b0_hz > 0.0))
        throw std::invalid_argument("beta_of: T and B0 must be > 0");
    return theta * frame_s * b0_hz / kLn2;
}

struct QosSpec {
    double theta = 0.0; // [1/bit]
    double beta = 0.0;  // theta T B0 / ln2, dimensionless

    static QosSpec from_theta(double theta, double frame_s, double b0_hz) {
        return {theta, beta_of(theta, frame_s, b0_hz)};
    }
    static QosSpec from_beta(double beta, double frame_s, double b0_hz) {
        if (!(beta >= 0.0)) throw std::invalid_argument("QosSpec: beta must be >= 0");
        return {beta * kLn2 / (frame_s * b0_hz), beta};
    }
};

// Fading-dependent transmit-power multiplier with unit mean under the law.
// Tabulated policies map gain-quantile bins to multipliers.
class PowerPolicy {
public:
    static PowerPolicy constant() { return PowerPolicy(); }

    // upper_edges are inclusive bin uppers, one fewer than multipliers.
    static PowerPolicy tabulated(std::vector<double> upper_edges, std::vector<double> multipliers) {
        if (multipliers.empty())
            throw std::invalid_argument("PowerPolicy: need at least one bin");
        if (upper_edges.size() + 1 != multipliers.size())
            throw std::invalid_argument("PowerPolicy: edge/multiplier count mismatch");
        if (!std::is_sorted(upper_edges.begin(), upper_edges.end()))
            throw std::invalid_argument("PowerPolicy: edges must be sorted");
        for (double m : multipliers)
            if (!(m >= 0.0)) throw std::invalid_argument("PowerPolicy: multipliers must be >= 0");
        PowerPolicy p;
        p.edges_ = std::move(upper_edges);
        p.multipliers_ = std::move(multipliers);
        return p;
    }

    double multiplier(double gain) const {
        if (multipliers_.empty()) return 1.0;
        const auto it = std::lower_bound(edges_.begin(), edges_.end(), gain);
        return multipliers_[static_cast<std::size_t>(it - edges_.begin())];
    }

    bool is_constant() const { return multipliers_.empty(); }
    const std::vector<double>& multipliers() const { return multipliers_; }
    const std::vector<double>& edges() const { return edges_; }

private:
    std::vector<double> edges_;
    std::vector<double> multipliers_;
};

struct EffCapEstimate {
    double value_bits = 0.0;     // bits per frame
    double std_error_bits = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Chunk-local sums for the shifted log-mean-exp plus plain rate moments.
struct McAccum {
    double max_x = -std::numeric_limits<double>::infinity();
    double s1 = 0.0; // sum exp(x - max_x)
    double s2 = 0.0; // sum exp(2 (x - max_x))
    double sum_u = 0.0;  // sum ln(1 + mu rho lambda)
    double sum_u2 = 0.0;
    double sum_mu = 0.0;
    std::int64_t n = 0;
    std::int64_t invalid = 0;

    void add(double u, double mu, double beta) {
        if (!std::isfinite(u)) {
            ++invalid;
            return;
        }
        const double x = -beta * u;
        if (x > max_x) {
            const double scale = std::exp(max_x - x);
            s1 *= scale;
            s2 *= scale * scale;
            max_x = x;
        }
        const double e = std::exp(x - max_x);
        s1 += e;
        s2 += e * e;
        sum_u += u;
        sum_u2 += u * u;
        sum_mu += mu;
        ++n;
    }

    void merge(const McAccum& o) {
        if (o.n > 0) {
            const double m = std::max(max_x, o.max_x);
            if (n > 0) {
                const double a = std::exp(max_x - m);
                s1 *= a;
                s2 *= a * a;
            }
            const double b = std::exp(o.max_x - m);
            s1 += o.s1 * b;
            s2 += o.s2 * b * b;
            max_x = m;
            sum_u += o.sum_u;
            sum_u2 += o.sum_u2;
            sum_mu += o.sum_mu;
            n += o.n;
        }
        invalid += o.invalid;
    }
};

struct McStats {
    EffCapEstimate estimate;
    double mu_mean = 1.0;
    double ergodic_bits = 0.0; // sample mean of r, bits per frame
};

inline McStats finish_accum(const McAccum& acc, const QosSpec& qos, double frame_s, double b0_hz,
                            std::uint64_t seed) {
    if (acc.n == 0)
        throw std::runtime_error("effective_capacity: no valid samples (all rates non-finite)");
    const double tb = frame_s * b0_hz;
    const double n = static_cast<double>(acc.n);
    McStats out;
    out.estimate.samples = acc.n;
    out.estimate.seed = seed;
    out.mu_mean = acc.sum_mu / n;
    out.ergodic_bits = tb * (acc.sum_u / n) / kLn2;
    if (qos.theta == 0.0) {
        out.estimate.value_bits = out.ergodic_bits;
        const double var_u = std::max(0.0, acc.sum_u2 / n - (acc.sum_u / n) * (acc.sum_u / n));
        out.estimate.std_error_bits = tb / kLn2 * std::sqrt(var_u / n);
        return out;
    }
    const double lme = acc.max_x + std::log(acc.s1 / n);
    out.estimate.value_bits = -(tb / (qos.beta * kLn2)) * lme;
    // delta method on ln of the sample mean
    const double rel_var = std::max(0.0, n * acc.s2 / (acc.s1 * acc.s1) - 1.0);
    out.estimate.std_error_bits = (tb / (qos.beta * kLn2)) * std::sqrt(rel_var / n);
    return out;
}

inline void check_qos(const QosSpec& qos, double frame_s, double b0_hz) {
    if (!(qos.theta >= 0.0) || !std::isfinite(qos.beta))
        throw std::invalid_argument("QosSpec: theta must be >= 0 and beta finite");
    const double expect = beta_of(qos.theta, frame_s, b0_hz);
    const double scale = std::max({1.0, std::abs(expect), std::abs(qos.beta)});
    if (std::abs(qos.beta - expect) > 1e-12 * scale)
        throw std::invalid_argument("QosSpec: beta inconsistent with theta T B0 / ln2");
}

} // namespace detail

// Effective capacity over an explicit gain sample set (common-random-number
// evaluations, the policy optimizer, and precomputed eigenvalue columns).
inline detail::McStats effective_capacity_stats_from_gains(
    const QosSpec& qos, double rho, const PowerPolicy& policy, std::span<const double> gains,
    double frame_s, double b0_hz, std::uint64_t seed = 0) {
    if (gains.empty()) throw std::invalid_argument("effective_capacity: no samples");
    if (!(rho >= 0.0)) throw std::invalid_argument("effective_capacity: SNR must be >= 0");
    detail::check_qos(qos, frame_s, b0_hz);
    detail::McAccum acc;
    for (double g : gains) {
        const double mu = policy.multiplier(g);
        acc.add(std::log1p(mu * rho * g), mu, qos.beta);
    }
    return detail::finish_accum(acc, qos, frame_s, b0_hz, seed);
}

inline detail::McStats effective_capacity_stats_mc(const QosSpec& qos, double rho,
                                                   const PowerPolicy& policy, const GainLaw& law,
                                                   double frame_s, double b0_hz,
                                                   std::int64_t samples, std::uint64_t seed,
                                                   int threads = 1) {
    if (samples < 1) throw std::invalid_argument("effective_capacity: need samples >= 1");
    if (!(rho >= 0.0)) throw std::invalid_argument("effective_capacity: SNR must be >= 0");
    detail::check_qos(qos, frame_s, b0_hz);
    auto chunks = map_chunks<detail::McAccum>(samples, threads,
        [&](std::int64_t begin, std::int64_t end) {
            detail::McAccum acc;
            for (std::int64_t i = begin; i < end; ++i) {
                SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
                const double g = law.draw(rng);
                const double mu = policy.multiplier(g);
                acc.add(std::log1p(mu * rho * g), mu, qos.beta);
            }
            return acc;
        });
    detail::McAccum total;
    for (const auto& c : chunks) total.merge(c);
    return detail::finish_accum(total, qos, frame_s, b0_hz, seed);
}

inline EffCapEstimate effective_capacity_mc(const QosSpec& qos, double rho,
                                            const PowerPolicy& policy, const GainLaw& law,
                                            double frame_s, double b0_hz, std::int64_t samples,
                                            std::uint64_t seed, int threads = 1) {
    return effective_capacity_stats_mc(qos, rho, policy, law, frame_s, b0_hz, samples, seed,
                                       threads)
        .estimate;
}

struct QosEeOptions {
    QosSpec qos;
    PowerPolicy policy = PowerPolicy::constant();
    GainLaw law = GainLaw::rayleigh();
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    // When set, every block must sit inside the high-EE area: raw SNR at or
    // below this threshold, or the call is rejected.
    std::optional<double> require_high_ee = std::nullopt;
};

struct QosEeResult {
    double ee = 0.0;               // bits/J
    double total_ce_bits = 0.0;    // sum of per-block effective capacities, per frame
    double expected_power_w = 0.0; // E{P_T} = sum_ij E{mu} p_ij
    EffCapEstimate block;          // one representative block estimate
};

// QoS-constrained EE of a grid: (sum C_e) / (T E{P_T}). Blocks with equal
// power share one estimate scaled by the block count; otherwise each block
// gets its own derived substream.
inline QosEeResult qos_ee(const SystemConfig& cfg, const ResourceGrid& grid,
                          const QosEeOptions& opt) {
    if (grid.blocks() == 0) throw std::invalid_argument("qos_ee: empty grid");
    const double noise = noise_power(grid.b0_hz, grid.n0_w_per_hz);
    if (opt.require_high_ee)
        for (double p : grid.power)
            if (!high_ee_check(p / noise, 1.0, *opt.require_high_ee, SnrCheckMode::raw_snr))
                throw std::invalid_argument("qos_ee: block SNR above the high-EE threshold");
    const bool homogeneous =
        std::all_of(grid.power.begin(), grid.power.end(),
                    [&](double p) { return p == grid.power.front(); });
    QosEeResult out;
    if (homogeneous) {
        const double rho = grid.power.front() / noise;
        auto stats = effective_capacity_stats_mc(opt.qos, rho, opt.policy, opt.law, cfg.T, cfg.B0,
                                                 opt.samples, opt.seed, opt.threads);
        out.block = stats.estimate;
        out.total_ce_bits = stats.estimate.value_bits * static_cast<double>(grid.blocks());
        out.expected_power_w =
            stats.mu_mean * grid.power.front() * static_cast<double>(grid.blocks());
    } else {
        for (std::size_t b = 0; b < grid.blocks(); ++b) {
            auto stats = effective_capacity_stats_mc(
                opt.qos, grid.power[b] / noise, opt.policy, opt.law, cfg.T, cfg.B0, opt.samples,
                derive_seed(opt.seed, static_cast<std::uint64_t>(b)), opt.threads);
            if (b == 0) out.block = stats.estimate;
            out.total_ce_bits += stats.estimate.value_bits;
            out.expected_power_w += stats.mu_mean * grid.power[b];
        }
    }
    if (!(out.expected_power_w > 0.0))
        throw std::invalid_argument("qos_ee: expected transmit power is zero");
    out.ee = out.total_ce_bits / (cfg.T * out.expected_power_w);
    return out;
}

struct PolicyOptResult {
    PowerPolicy policy = PowerPolicy::constant();
    double ce_bits = 0.0; // achieved effective capacity on the sample set
    bool converged = false;
    int evaluations = 0;
};

// Maximizes the sampled effective capacity over gain-quantile bin multipliers
// subject to unit empirical mean, multipliers monotone non-decreasing in the
// gain. Deterministic pattern search on a fixed sample set; if the evaluation
// cap is hit the best iterate is returned with converged = false.
inline PolicyOptResult optimize_power_policy(const QosSpec& qos, const GainLaw& law, int bins,
                                             double rho, double frame_s, double b0_hz,
                                             std::int64_t samples, std::uint64_t seed,
                                             int max_evaluations = 20000) {
    if (bins < 1) throw std::invalid_argument("optimize_power_policy: bins must be >= 1");
    if (!(qos.theta > 0.0))
        throw std::invalid_argument("optimize_power_policy: requires theta > 0");
    detail::check_qos(qos, frame_s, b0_hz);
    if (samples < bins)
        throw std::invalid_argument("optimize_power_policy: need at least one sample per bin");

    std::vector<double> gains(static_cast<std::size_t>(samples));
    for (std::int64_t i = 0; i < samples; ++i) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
        gains[static_cast<std::size_t>(i)] = law.draw(rng);
    }

    // Equal-mass quantile edges from the sorted sample. Cuts sit halfway
    // between distinct adjacent values so ties (discrete laws) fall whole
    // into one bin; each quantile target takes the nearest admissible cut.
    std::vector<double> sorted = gains;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<double, std::int64_t>> cuts; // (edge value, mass below)
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] < sorted[i + 1])
            cuts.emplace_back(0.5 * (sorted[i] + sorted[i + 1]),
                              static_cast<std::int64_t>(i + 1));
    std::vector<double> edges;
    for (int k = 1; k < bins; ++k) {
        const double target = static_cast<double>(k) * static_cast<double>(samples) / bins;
        const std::pair<double, std::int64_t>* nearest = nullptr;
        for (const auto& cut : cuts)
            if (!nearest || std::fabs(static_cast<double>(cut.second) - target) <
                                std::fabs(static_cast<double>(nearest->second) - target))
                nearest = &cut;
        if (nearest) edges.push_back(nearest->first);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    bins = static_cast<int>(edges.size()) + 1; // fewer distinct values than requested bins

    std::vector<std::size_t> bin_of(gains.size());
    std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const auto it = std::lower_bound(edges.begin(), edges.end(), gains[i]);
        bin_of[i] = static_cast<std::size_t>(it - edges.begin());
        mass[bin_of[i]] += 1.0;
    }
    for (double& m : mass) m /= static_cast<double>(samples);
    if (const auto* atoms = law.atoms()) {
        // finite law: exact bin masses keep the unit-mean constraint tied to
        // the law itself rather than to the sample proportions
        std::fill(mass.begin(), mass.end(), 0.0);
        for (double a : *atoms) {
            const auto it = std::lower_bound(edges.begin(), edges.end(), a);
            mass[static_cast<std::size_t>(it - edges.begin())] += 1.0;
        }
        for (double& m : mass) m /= static_cast<double>(atoms->size());
    }

    auto project = [&](std::vector<double> mu) -> std::vector<double> {
        for (double& m : mu) m = std::max(0.0, m);
        for (std::size_t b = 1; b < mu.size(); ++b) mu[b] = std::max(mu[b], mu[b - 1]);
        double mean = 0.0;
        for (std::size_t b = 0; b < mu.size(); ++b) mean += mass[b] * mu[b];
        if (!(mean > 0.0)) return {};
        for (double& m : mu) m /= mean;
        return mu;
    };

    int evals = 0;
    auto objective = [&](const std::vector<double>& mu) {
        ++evals;
        detail::McAccum acc;
        for (std::size_t i = 0; i < gains.size(); ++i) {
            const double m = mu[bin_of[i]];
            acc.add(std::log1p(m * rho * gains[i]), m, qos.beta);
        }
        return detail::finish_accum(acc, qos, frame_s, b0_hz, seed).estimate.value_bits;
    };

    bool capped = false;
    static constexpr double kSteps[] = {0.5, 0.25, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
    auto search_from = [&](std::vector<double> mu, double& value) {
        mu = project(std::move(mu));
        if (mu.empty()) return mu;
        if (evals >= max_evaluations) {
            capped = true;
            return std::vector<double>{};
        }
        value = objective(mu);
        bool moved = true;
        while (moved && !capped) { // rewind to coarse steps after fine progress
            moved = false;
            for (double step : kSteps) {
                bool improved = true;
                while (improved && !capped) {
                    improved = false;
                    for (std::size_t b = 0; b < mu.size() && !capped; ++b) {
                        for (double dir : {+1.0, -1.0}) {
                            if (evals >= max_evaluations) {
                                capped = true;
                                break;
                            }
                            std::vector<double> cand = mu;
                            cand[b] += dir * step;
                            cand = project(std::move(cand));
                            if (cand.empty()) continue;
                            const double v = objective(cand);
                            if (v > value * (1.0 + 1e-14) + 1e-300) {
                                value = v;
                                mu = std::move(cand);
                                improved = true;
                                moved = true;
                            }
                        }
                    }
                }
            }
        }
        return mu;
    };

    // several structured starts; the sampled objective is not concave in the
    // multipliers and a single coordinate descent can stall
    std::vector<std::vector<double>> starts;
    starts.emplace_back(static_cast<std::size_t>(bins), 1.0);
    if (bins > 1) {
        std::vector<double> ramp(static_cast<std::size_t>(bins));
        for (int b = 0; b < bins; ++b) ramp[static_cast<std::size_t>(b)] = b + 1.0;
        starts.push_back(std::move(ramp));
        std::vector<double> top(static_cast<std::size_t>(bins), 0.0);
        top.back() = 1.0;
        starts.push_back(std::move(top));
    }

    std::vector<double> best_mu(static_cast<std::size_t>(bins), 1.0);
    double best = -std::numeric_limits<double>::infinity();
    for (auto& s : starts) {
        double value = 0.0;
        auto mu = search_from(std::move(s), value);
        if (!mu.empty() && value > best) {
            best = value;
            best_mu = std::move(mu);
        }
    }

    PolicyOptResult out;
    out.policy = bins == 1 ? PowerPolicy::constant()
                           : PowerPolicy::tabulated(std::move(edges), std::move(best_mu));
    out.ce_bits = best;
    out.converged = !capped;
    out.evaluations = evals;
    return out;
}

} // namespace eekit
