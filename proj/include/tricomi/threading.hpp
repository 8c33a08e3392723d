#pragma once

// Deterministic parallel map: work is split into contiguous index chunks,
// each chunk written to disjoint slots, so results are bitwise identical
// for every thread count. Reductions happen serially afterwards.

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tricomi {

inline int max_threads() {
    if (const char* env = std::getenv("TRICOMI_LAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class F>
void parallel_for(std::size_t n, F&& body, int threads = 0) {
    if (threads <= 0) threads = max_threads();
    threads = static_cast<int>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace tricomi
