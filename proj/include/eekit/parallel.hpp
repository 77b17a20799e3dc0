// Deterministic work partitioning: the index range is cut into fixed-size
// chunks whose boundaries do not depend on the thread count, each chunk is
// reduced serially, and the caller merges chunk results in index order.
// Results are therefore identical for any number of workers.
#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace eekit {

inline constexpr std::int64_t kDefaultChunk = 1 << 14;

template <class Result, class Fn>
std::vector<Result> map_chunks(std::int64_t total, int threads, Fn&& fn,
                               std::int64_t chunk_size = kDefaultChunk) {
    if (total <= 0) return {};
    const std::int64_t n_chunks = (total + chunk_size - 1) / chunk_size;
    std::vector<Result> results(static_cast<std::size_t>(n_chunks));
    auto run_chunk = [&](std::int64_t c) {
        const std::int64_t begin = c * chunk_size;
        const std::int64_t end = std::min(total, begin + chunk_size);
        results[static_cast<std::size_t>(c)] = fn(begin, end);
    };
    if (threads <= 1 || n_chunks == 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
        return results;
    }
    std::atomic<std::int64_t> next{0};
    const int workers = static_cast<int>(std::min<std::int64_t>(threads, n_chunks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::int64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                run_chunk(c);
        });
    for (auto& t : pool) t.join();
    return results;
}

} // namespace eekit
