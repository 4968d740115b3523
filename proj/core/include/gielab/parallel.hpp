#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace gielab {

/// Statically partitioned parallel loop. Each index is processed exactly once
/// and the caller's writes go to per-index slots, so results never depend on
/// scheduling. jobs <= 1 runs inline.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gielab
