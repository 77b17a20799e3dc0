#include <doctest.h>

#include <cmath>

#include "eekit/allocator.hpp"
#include "eekit/rng.hpp"
#include "oracles.hpp"

using namespace eekit;

namespace {
const SystemConfig kCfg; // defaults: B0 = 10 MHz, rho_th = 0.1
}

TEST_CASE("min_resources boundary: one block exactly") {
    const double rate = shannon_capacity(kCfg.B0, kCfg.rho_th);
    for (Scheme s : {Scheme::frequency_only, Scheme::spatial_only, Scheme::two_dimension}) {
        const auto plan = min_resources(rate, kCfg.B0, kCfg.N0, kCfg.rho_th, s);
        CHECK(plan.feasible);
        CHECK(plan.blocks() == 1);
    }
}

TEST_CASE("min_resources at 5 Gb/s") {
    const auto freq = min_resources(5e9, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::frequency_only);
    CHECK(freq.n_freq == 3637);
    CHECK(freq.m_space == 1);
    // independent minimality scan
    const double per_block = shannon_capacity(kCfg.B0, kCfg.rho_th);
    CHECK(oracles::brute_force_min_blocks(5e9, per_block) == 3637);
    CHECK(static_cast<double>(freq.n_freq - 1) * per_block < 5e9);
    CHECK(freq.predicted_capacity_bps >= 5e9);

    const auto spatial = min_resources(5e9, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::spatial_only);
    CHECK(spatial.m_space == 3637);
    CHECK(spatial.n_freq == 1);

    const auto two = min_resources(5e9, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::two_dimension);
    CHECK(two.n_freq == 61);
    CHECK(two.m_space == 60);
    CHECK(two.blocks() >= 3637);
    CHECK(std::max(two.n_freq, two.m_space) == 61);
}

TEST_CASE("min_resources minimality on random targets") {
    for (int k = 0; k < 10; ++k) {
        SubstreamRng rng(2468, static_cast<std::uint64_t>(k));
        const double rate = 1e8 * std::pow(100.0, rng.uniform01()); // 1e8 .. 1e10
        const double rho_th = db_to_linear(-20.0 + 17.0 * rng.uniform01());
        const auto plan =
            min_resources(rate, kCfg.B0, kCfg.N0, rho_th, Scheme::frequency_only);
        const double per_block = shannon_capacity(kCfg.B0, rho_th);
        CHECK(plan.n_freq == oracles::brute_force_min_blocks(rate, per_block));
    }
}

TEST_CASE("plans operate inside the high EE area") {
    const auto plan = min_resources(5e9, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::two_dimension);
    ResourceGrid g = allocate_uniform(plan.total_power_w, static_cast<int>(plan.n_freq),
                                      static_cast<int>(plan.m_space), kCfg.B0, kCfg.N0);
    CHECK(high_ee_check(g, kCfg.rho_th).all_ok);
}

TEST_CASE("min_resources caps and errors") {
    CHECK_THROWS_AS(min_resources(0.0, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::frequency_only),
                    std::invalid_argument);
    const auto capped =
        min_resources(5e9, kCfg.B0, kCfg.N0, kCfg.rho_th, Scheme::frequency_only, 1.0, 0L);
    CHECK_FALSE(capped.feasible);
    CHECK(capped.blocks() == 0);
}

TEST_CASE("allocate_uniform") {
    const auto zero = allocate_uniform(0.0, 3, 2, kCfg.B0, kCfg.N0);
    for (double p : zero.power) CHECK(p == 0.0);

    const auto g = allocate_uniform(6.4e-12, 100, 64, kCfg.B0, kCfg.N0);
    for (double p : g.power) CHECK(p == doctest::Approx(1e-15).epsilon(1e-14));
    CHECK(g.power_sum() == doctest::Approx(6.4e-12).epsilon(1e-12));

    SubstreamRng rng(1, 1);
    for (int rep = 0; rep < 5; ++rep) {
        const double pt = rng.uniform01() * 10.0;
        const auto r = allocate_uniform(pt, 17, 9, kCfg.B0, kCfg.N0);
        CHECK(r.power_sum() == doctest::Approx(pt).epsilon(1e-12));
    }
    CHECK_THROWS_AS(allocate_uniform(1.0, 0, 4, kCfg.B0, kCfg.N0), std::invalid_argument);
}

TEST_CASE("grid sweep properties") {
    const std::vector<int> ns{1, 2, 3}, ms{1, 2, 3};
    const auto rows = ee_vs_grid_sweep(kCfg.PT, ns, ms, kCfg);
    REQUIRE(rows.size() == 9);

    // row-major, N outer
    CHECK(rows[0].n_freq == 1);
    CHECK(rows[0].m_space == 1);
    CHECK(rows[1].m_space == 2);
    CHECK(rows[3].n_freq == 2);

    // (1, 1) reduces to the scalar link
    const double rho = kCfg.PT / (kCfg.B0 * kCfg.N0);
    CHECK(rows[0].ee ==
          doctest::Approx(shannon_capacity(kCfg.B0, rho) / kCfg.PT).epsilon(1e-12));

    // doubling the block count at fixed PT strictly raises EE
    for (const auto& a : rows)
        for (const auto& b : rows)
            if (b.n_freq * b.m_space == 2 * a.n_freq * a.m_space) CHECK(b.ee > a.ee);

    // swap symmetry under unit gains
    auto find = [&](int n, int m) {
        for (const auto& r : rows)
            if (r.n_freq == n && r.m_space == m) return r.ee;
        FAIL("row not found");
        return 0.0;
    };
    CHECK(find(2, 3) == find(3, 2));

    // EE never decreases when the block count grows
    std::vector<SweepRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.n_freq * a.m_space < b.n_freq * b.m_space;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].n_freq * sorted[i].m_space > sorted[i - 1].n_freq * sorted[i - 1].m_space)
            CHECK(sorted[i].ee > sorted[i - 1].ee);

    CHECK_THROWS_AS(ee_vs_grid_sweep(kCfg.PT, {}, ms, kCfg), std::invalid_argument);
}

TEST_CASE("scheme comparison") {
    const auto cmp = compare_schemes(5e9, kCfg.rho_th, kCfg);
    CHECK(cmp.frequency_only.n_freq == 3637);
    CHECK(cmp.spatial_only.m_space == 3637);
    CHECK(std::max(cmp.two_dimension.n_freq, cmp.two_dimension.m_space) == 61);
    // threshold operation gives every scheme the same EE
    CHECK(cmp.frequency_only.predicted_ee ==
          doctest::Approx(cmp.two_dimension.predicted_ee).epsilon(1e-12));

    const auto refs = reference_scheme_rows();
    REQUIRE(refs.size() == 3);
    CHECK(refs[2].n_freq == 100);
    CHECK(refs[2].m_space == 64);
    CHECK(refs[2].ee == doctest::Approx(2.3e8));

    // the reported 100x64 grid carries the target comfortably
    const double grid_rate = 6400.0 * shannon_capacity(kCfg.B0, kCfg.rho_th);
    CHECK(grid_rate == doctest::Approx(8.800226e9).epsilon(1e-5));
    CHECK(grid_rate >= 5e9);

    const auto infeasible = compare_schemes(5e9, kCfg.rho_th, kCfg, 0L);
    CHECK_FALSE(infeasible.frequency_only.feasible);
}
