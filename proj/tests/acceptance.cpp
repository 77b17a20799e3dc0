// Acceptance suite. Each criterion prints one PASS/FAIL line with its
// measured numbers; run with no argument for all criteria or with 1..9 for a
// single one. Exit status is nonzero if any executed criterion failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eekit/eekit.hpp"

namespace fs = std::filesystem;
using namespace eekit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + what;
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const SystemConfig kCfg; // defaults: B0 = 10 MHz, T = 1 ms, N0 = -174 dBm/Hz, rho_th = -10 dB

// --- 1. EE-vs-SNR ratio reproduction -------------------------------------
Outcome criterion1() {
    Outcome o;
    const double r1 = ee_of_snr(db_to_linear(-16.0), kCfg.N0) / ee_of_snr(db_to_linear(20.0), kCfg.N0);
    const double r2 = ee_of_snr(db_to_linear(0.0), kCfg.N0) / ee_of_snr(db_to_linear(-16.0), kCfg.N0);
    const double want1 = 494996069.090583 / 23130394.8469213;  // plotted curve, -16 dB over 20 dB
    const double want2 = 347396517.921382 / 494996069.090583;  // 0 dB over -16 dB
    require(o, std::fabs(r1 / want1 - 1.0) <= 0.005,
            "EE(-16dB)/EE(20dB) = " + fmt(r1) + " vs " + fmt(want1));
    require(o, std::fabs(r2 / want2 - 1.0) <= 0.005,
            "EE(0dB)/EE(-16dB) = " + fmt(r2) + " vs " + fmt(want2));
    o.detail = "ratios " + fmt(r1) + " (want " + fmt(want1) + "), " + fmt(r2) + " (want " +
               fmt(want2) + ")";
    return o;
}

// --- 2. vanishing-SNR limit of the QoS-constrained EE --------------------
Outcome criterion2() {
    Outcome o;
    const double rho = 1e-3;
    ResourceGrid grid = make_grid(1, 1, kCfg.B0, kCfg.N0);
    grid.power[0] = rho * kCfg.B0 * kCfg.N0;
    QosEeOptions opt;
    opt.qos = QosSpec::from_beta(1.0, kCfg.T, kCfg.B0);
    opt.law = GainLaw::rayleigh();
    opt.samples = 1000000;
    opt.seed = 20240601;
    opt.threads = 2;
    const double ee = qos_ee(kCfg, grid, opt).ee;
    const double limit = ee_limit(1.0, kCfg.N0);
    const double rel = std::fabs(ee / limit - 1.0);
    require(o, rel <= 0.01, "relative gap " + fmt(rel) + " > 1%");
    o.detail = "qos_ee = " + fmt(ee) + " bits/J, limit = " + fmt(limit) + ", gap " + fmt(rel);
    return o;
}

// --- 3. second-order approximation vs Monte Carlo across the band --------
Outcome criterion3() {
    Outcome o;
    const QosSpec qos = QosSpec::from_beta(1.0, kCfg.T, kCfg.B0);
    const GainLaw law = GainLaw::rayleigh();
    const PowerPolicy policy = PowerPolicy::constant();
    std::string devs;
    for (double db : {-28.0, -24.0, -20.0, -16.0, -12.0, -10.0}) {
        const double rho = db_to_linear(db);
        const auto est = effective_capacity_mc(qos, rho, policy, law, kCfg.T, kCfg.B0, 1000000,
                                               7777, 2);
        const double mc = est.value_bits / (kCfg.T * rho * kCfg.B0 * kCfg.N0);
        const ApproxInputs in{rho, 1.0, 1.0, 2.0, 1.0, kCfg.N0, DeltaMode::taylor_corrected};
        const double approx = approx_ee(in).value;
        const double rel = std::fabs(approx / mc - 1.0);
        devs += fmt(db) + "dB:" + fmt(100 * rel) + "% ";
        require(o, rel <= 0.02,
                "corrected approximation off by " + fmt(100 * rel) + "% at " + fmt(db) + " dB");
    }
    o.detail = "deviations " + devs;
    return o;
}

// --- 4. numeric second derivative fixes the gap's moment expression ------
Outcome criterion4() {
    Outcome o;
    std::string got;
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto d = taylor_oracle(GainLaw::rayleigh(), beta, kCfg.T, kCfg.B0, 1000000, 4141,
                                     1e-3, 2);
        const double expected = -(kCfg.B0 / kLn2) * ((beta + 1.0) * 2.0 - beta); // E{l^2}=2, E{l}=1
        const double rel = std::fabs(d.second / expected - 1.0);
        got += "beta=" + fmt(beta) + ":" + fmt(100 * rel) + "% ";
        require(o, rel <= 0.03,
                "f''(0) off by " + fmt(100 * rel) + "% at beta " + fmt(beta));
    }
    o.detail = "second-derivative deviations " + got;
    return o;
}

// --- 5. EE strictly decreases as the QoS exponent grows ------------------
Outcome criterion5() {
    Outcome o;
    const GainLaw law = GainLaw::rayleigh();
    const PowerPolicy policy = PowerPolicy::constant();
    int checked = 0;
    for (int db = -19; db <= 0; ++db) {
        const double rho = db_to_linear(db);
        double prev = std::numeric_limits<double>::infinity();
        for (double theta : {0.01, 0.1, 1.0}) { // pinned common draws across theta
            const auto qos = QosSpec::from_theta(theta, kCfg.T, kCfg.B0);
            const auto est = effective_capacity_mc(qos, rho, policy, law, kCfg.T, kCfg.B0,
                                                   200000, 1111, 2);
            const double ee = est.value_bits / (kCfg.T * rho * kCfg.B0 * kCfg.N0);
            require(o, ee < prev,
                    "EE not strictly decreasing in theta at " + fmt(db) + " dB");
            prev = ee;
            ++checked;
        }
    }
    o.detail = "checked " + std::to_string(checked) + " (rho_th, theta) points";
    return o;
}

// --- 6. allocator minimality and the 100x64 feasibility ------------------
Outcome criterion6() {
    Outcome o;
    for (int k = 0; k < 20; ++k) {
        SubstreamRng rng(606060, static_cast<std::uint64_t>(k));
        const double rate = 1e8 * std::pow(100.0, rng.uniform01());
        const double rho_th = db_to_linear(-20.0 + 17.0 * rng.uniform01());
        const auto plan = min_resources(rate, kCfg.B0, kCfg.N0, rho_th, Scheme::frequency_only);
        const double per_block = shannon_capacity(kCfg.B0, rho_th);
        long brute = 1;
        while (static_cast<double>(brute) * per_block < rate) ++brute;
        require(o, plan.n_freq == brute,
                "count " + std::to_string(plan.n_freq) + " != brute-force " +
                    std::to_string(brute) + " for R=" + fmt(rate) + " rho_th=" + fmt(rho_th));
    }
    const double grid_rate = 6400.0 * shannon_capacity(kCfg.B0, db_to_linear(-10.0));
    require(o, grid_rate >= 5e9, "100x64 grid capacity " + fmt(grid_rate) + " < 5e9");
    o.detail = "20 random instances minimal; 100x64 capacity " + fmt(grid_rate) + " >= 5e9";
    return o;
}

// --- 7. Wishart trace identity -------------------------------------------
Outcome criterion7() {
    Outcome o;
    const std::int64_t samples = 100000;
    double worst = 0.0;
    for (int ms : {1, 2, 4, 8})
        for (int mr : {1, 2, 4, 8}) {
            const std::uint64_t seed =
                derive_seed(314159, static_cast<std::uint64_t>(ms * 100 + mr));
            auto partials = map_chunks<double>(samples, 2, [&](std::int64_t b, std::int64_t e) {
                double sum = 0.0;
                for (std::int64_t i = b; i < e; ++i) {
                    SubstreamRng rng(seed, static_cast<std::uint64_t>(i));
                    for (double v : sample_wishart_eigs(ms, mr, rng)) sum += v;
                }
                return sum;
            });
            double total = 0.0;
            for (double p : partials) total += p;
            const double rel =
                std::fabs(total / static_cast<double>(samples) / (ms * mr) - 1.0);
            worst = std::max(worst, rel);
            require(o, rel <= 0.01,
                    "trace mean off by " + fmt(100 * rel) + "% at Ms=" + std::to_string(ms) +
                        " Mr=" + std::to_string(mr));
        }
    o.detail = "16 antenna pairs, worst trace deviation " + fmt(100 * worst) + "%";
    return o;
}

// --- 8. bandwidth sweep shape properties ----------------------------------
Outcome criterion8() {
    Outcome o;
    SystemConfig cfg = kCfg;
    cfg.samples = 50000;
    cfg.seed = 90210;
    const auto rows = bandwidth_sweep(cfg, 2);
    auto series_ce = [&](int ms, int mr) {
        std::vector<double> v;
        for (const auto& r : rows)
            if (r.ms == ms && r.mr == mr) v.push_back(r.ce_total_bits);
        return v;
    };
    auto series_ee = [&](int ms, int mr) {
        std::vector<double> v;
        for (const auto& r : rows)
            if (r.ms == ms && r.mr == mr) v.push_back(r.ee);
        return v;
    };
    for (auto [ms, mr] : {std::pair{64, 4}, {64, 16}, {128, 4}, {128, 16}}) {
        const auto ce = series_ce(ms, mr);
        require(o, ce.size() == 10, "expected 10 bandwidth points");
        for (std::size_t i = 1; i < ce.size(); ++i)
            require(o, ce[i] > ce[i - 1],
                    "capacity not strictly increasing in bandwidth at Ms=" +
                        std::to_string(ms) + " Mr=" + std::to_string(mr));
    }
    const auto ce16 = series_ce(64, 16), ce4 = series_ce(64, 4);
    for (std::size_t i = 0; i < ce16.size(); ++i)
        require(o, ce16[i] > ce4[i], "Mr=16 capacity does not exceed Mr=4 at Ms=64");
    for (int mr : {4, 16}) {
        const auto wide = series_ee(128, mr), narrow = series_ee(64, mr);
        for (std::size_t i = 0; i < wide.size(); ++i)
            require(o, wide[i] < narrow[i],
                    "Ms=128 EE not below Ms=64 at Mr=" + std::to_string(mr));
    }
    o.detail = "capacity monotone in B, Mr ordering, Ms=128 EE below Ms=64";
    return o;
}

// --- 9. byte-identical reruns across thread counts ------------------------
Outcome criterion9() {
    Outcome o;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto base = fs::temp_directory_path() / "eekit_acceptance9";
    fs::remove_all(base);
    for (const std::string name : {"fig1", "fig7", "fig8"}) {
        ExperimentSpec one;
        one.name = name;
        one.out_dir = base / (name + "_t1");
        one.threads = 1;
        one.overrides.emplace_back("samples", "20000");
        ExperimentSpec two = one;
        two.out_dir = base / (name + "_t3");
        two.threads = 3;
        const auto r1 = run_experiment(one);
        const auto r2 = run_experiment(two);
        require(o, r1.outputs.size() == r2.outputs.size(), name + ": output sets differ");
        for (std::size_t i = 0; i < r1.outputs.size(); ++i)
            require(o, slurp(r1.outputs[i]) == slurp(r2.outputs[i]),
                    name + ": " + r1.outputs[i].filename().string() +
                        " differs across thread counts");
        require(o, slurp(r1.manifest) == slurp(r2.manifest), name + ": manifest differs");
    }
    fs::remove_all(base);
    o.detail = "fig1, fig7, fig8 byte-identical with 1 and 3 workers";
    return o;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"EE ratio reproduction (-16/20 dB and 0/-16 dB within 0.5%)", criterion1},
        {"QoS EE reaches the low-SNR limit within 1% at rho_th = 1e-3", criterion2},
        {"corrected approximation within 2% of Monte Carlo over -28..-10 dB", criterion3},
        {"numeric f''(0) matches the moment expression within 3%", criterion4},
        {"EE strictly decreasing in theta over the -19..0 dB grid", criterion5},
        {"allocator minimality on 20 random instances; 100x64 feasible", criterion6},
        {"Wishart trace identity within 1% for all antenna pairs", criterion7},
        {"bandwidth sweep capacity/EE orderings", criterion8},
        {"byte-identical reruns across thread counts", criterion9},
    };
    return all;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(criteria().size())) {
            std::fprintf(stderr, "usage: %s [1..%zu]\n", argv[0], criteria().size());
            return 2;
        }
    }
    bool all_pass = true;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria()[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %zu: %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria()[i].title, o.detail.c_str(), secs);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
