// Fading generation: scalar Rayleigh power gains and sorted eigenvalues of
// central Wishart matrices built from i.i.d. CN(0,1) channel entries, plus
// empirical moment summaries. All sampling is addressed by (seed, index) so
// sequences are reproducible regardless of how work is partitioned.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "eekit/config.hpp"
#include "eekit/csv.hpp"
#include "eekit/parallel.hpp"
#include "eekit/rng.hpp"

namespace eekit {

struct ChannelSample {
    enum class Kind { scalar, mimo };
    Kind kind = Kind::scalar;
    double gain = 0.0;               // scalar case
    std::vector<double> eigs;        // mimo case, sorted non-increasing
};

struct MomentSummary {
    double mean = 0.0;
    double second = 0.0;   // E{x^2}
    double variance = 0.0; // second - mean^2
    std::size_t count = 0;
};

// |h|^2 for h ~ CN(0,1); exponentially distributed with mean 1.
inline double sample_rayleigh_gain(SubstreamRng& rng) {
    return std::norm(rng.cgauss());
}

namespace detail {

inline std::vector<double> wishart_eigs_once(int Ms, int Mr, SubstreamRng& rng) {
    const int m = std::min(Ms, Mr);
    const int n = std::max(Ms, Mr);
    // Gram matrix of the smaller dimension; the nonzero spectrum of H H^* and
    // H^* H coincides, only singular values matter downstream.
    Eigen::MatrixXcd z(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            z(i, j) = rng.cgauss();
    Eigen::MatrixXcd gram = z * z.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) return {};
    std::vector<double> eigs(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        double v = solver.eigenvalues()(m - 1 - k); // ascending -> descending
        eigs[static_cast<std::size_t>(k)] = v > 0.0 ? v : 0.0;
    }
    return eigs;
}

} // namespace detail

// Descending eigenvalues of H H^*, H with i.i.d. unit-variance CN entries.
// A failed decomposition is retried once with a fresh draw from the same
// substream, then reported.
inline std::vector<double> sample_wishart_eigs(int Ms, int Mr, SubstreamRng& rng) {
    if (Ms < 1 || Mr < 1)
        throw std::invalid_argument("sample_wishart_eigs: antenna counts must be >= 1");
    auto eigs = detail::wishart_eigs_once(Ms, Mr, rng);
    if (eigs.empty()) eigs = detail::wishart_eigs_once(Ms, Mr, rng);
    if (eigs.empty())
        throw std::runtime_error("sample_wishart_eigs: eigendecomposition failed twice");
    return eigs;
}

// S independent draws of the j-th largest eigenvalue (j is 1-based).
inline std::vector<double> marginal_eig_samples(int Ms, int Mr, int j, std::int64_t count,
                                                std::uint64_t seed, int threads = 1) {
    const int m = std::min(Ms, Mr);
    if (j < 1 || j > m)
        throw std::invalid_argument("marginal_eig_samples: eigenvalue rank out of range");
    if (count < 1)
        throw std::invalid_argument("marginal_eig_samples: need at least one sample");
    std::vector<double> out(static_cast<std::size_t>(count));
    map_chunks<int>(count, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] =
                sample_wishart_eigs(Ms, Mr, rng)[static_cast<std::size_t>(j - 1)];
        }
        return 0;
    });
    return out;
}

inline ChannelSample draw_scalar_sample(SubstreamRng& rng) {
    ChannelSample s;
    s.kind = ChannelSample::Kind::scalar;
    s.gain = sample_rayleigh_gain(rng);
    return s;
}

inline ChannelSample draw_mimo_sample(int Ms, int Mr, SubstreamRng& rng) {
    ChannelSample s;
    s.kind = ChannelSample::Kind::mimo;
    s.eigs = sample_wishart_eigs(Ms, Mr, rng);
    s.gain = s.eigs.front();
    return s;
}

// One fading realization for every block of the N x M grid, row-major with
// the frequency index outer. Block (i, j) takes the rank-j eigenvalue of the
// channel drawn for frequency i; with shared_eigs_across_freq a single draw
// serves all frequency channels of the frame.
inline std::vector<double> grid_gain_matrix(const SystemConfig& cfg, std::uint64_t seed,
                                            std::uint64_t frame_index = 0) {
    if (cfg.M > std::min(cfg.Ms, cfg.Mr))
        throw std::invalid_argument("grid_gain_matrix: M exceeds min(Ms,Mr)");
    std::vector<double> gains(static_cast<std::size_t>(cfg.N) * static_cast<std::size_t>(cfg.M));
    std::vector<double> eigs;
    for (int i = 0; i < cfg.N; ++i) {
        if (i == 0 || !cfg.shared_eigs_across_freq) {
            const std::uint64_t stream =
                cfg.shared_eigs_across_freq ? frame_index
                                            : frame_index * static_cast<std::uint64_t>(cfg.N) +
                                                  static_cast<std::uint64_t>(i);
            SubstreamRng rng(seed, stream);
            eigs = sample_wishart_eigs(cfg.Ms, cfg.Mr, rng);
        }
        for (int j = 0; j < cfg.M; ++j)
            gains[static_cast<std::size_t>(i) * cfg.M + j] = eigs[static_cast<std::size_t>(j)];
    }
    return gains;
}

inline MomentSummary moments(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("moments: empty input");
    double s1 = 0.0, s2 = 0.0;
    for (double x : samples) {
        s1 += x;
        s2 += x * x;
    }
    MomentSummary m;
    m.count = samples.size();
    m.mean = s1 / static_cast<double>(m.count);
    m.second = s2 / static_cast<double>(m.count);
    m.variance = m.second - m.mean * m.mean;
    if (m.variance < 0.0 && m.variance > -1e-12 * std::max(1.0, m.second)) m.variance = 0.0;
    return m;
}

// CSV dump of eigenvalue draws: sample_index,eig_rank,value
inline void write_sample_dump(const std::filesystem::path& path, int Ms, int Mr,
                              std::int64_t count, std::uint64_t seed) {
    CsvWriter csv(path, {"sample_index", "eig_rank", "value"});
    for (std::int64_t i = 0; i < count; ++i) {
        SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
        auto eigs = sample_wishart_eigs(Ms, Mr, rng);
        for (std::size_t k = 0; k < eigs.size(); ++k)
            csv.row().integer(i).integer(static_cast<std::int64_t>(k + 1)).num(eigs[k]);
    }
}

// A scalar fading law that Monte Carlo estimators can draw from. Sample i of
// a law is always produced from substream (seed, i) alone.
class GainLaw {
public:
    static GainLaw deterministic(double gain) {
        if (!(gain >= 0.0)) throw std::invalid_argument("GainLaw: gain must be >= 0");
        GainLaw g;
        g.kind_ = Kind::deterministic;
        g.value_ = gain;
        return g;
    }
    static GainLaw rayleigh() {
        GainLaw g;
        g.kind_ = Kind::rayleigh;
        return g;
    }
    static GainLaw wishart_marginal(int Ms, int Mr, int rank) {
        if (rank < 1 || rank > std::min(Ms, Mr))
            throw std::invalid_argument("GainLaw: eigenvalue rank out of range");
        GainLaw g;
        g.kind_ = Kind::wishart;
        g.ms_ = Ms;
        g.mr_ = Mr;
        g.rank_ = rank;
        return g;
    }
    // Equiprobable atoms; used for small synthetic channels.
    static GainLaw discrete(std::vector<double> atoms) {
        if (atoms.empty()) throw std::invalid_argument("GainLaw: no atoms");
        for (double a : atoms)
            if (!(a >= 0.0)) throw std::invalid_argument("GainLaw: atoms must be >= 0");
        GainLaw g;
        g.kind_ = Kind::discrete;
        g.atoms_ = std::move(atoms);
        return g;
    }

    double draw(SubstreamRng& rng) const {
        switch (kind_) {
        case Kind::deterministic: return value_;
        case Kind::rayleigh: return sample_rayleigh_gain(rng);
        case Kind::wishart:
            return sample_wishart_eigs(ms_, mr_, rng)[static_cast<std::size_t>(rank_ - 1)];
        case Kind::discrete:
            return atoms_[static_cast<std::size_t>(rng.next_u64() % atoms_.size())];
        }
        return 0.0;
    }

    bool is_deterministic() const { return kind_ == Kind::deterministic; }

    // Equiprobable support when the law is finite; null for continuous laws.
    const std::vector<double>* atoms() const {
        return kind_ == Kind::discrete ? &atoms_ : nullptr;
    }

private:
    enum class Kind { deterministic, rayleigh, wishart, discrete };
    Kind kind_ = Kind::deterministic;
    double value_ = 1.0;
    int ms_ = 1, mr_ = 1, rank_ = 1;
    std::vector<double> atoms_;
};

} // namespace eekit
