#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace bimf {

inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Run fn(i) for i in [0, n) on up to `threads` workers over contiguous
/// index blocks. Callers write per-index results into preallocated storage,
/// so the final reduction order (and therefore the result) is independent of
/// the thread count.
template <class Fn>
void parallel_for_index(int n, int threads, Fn fn) {
    threads = std::min(resolve_thread_count(threads), std::max(n, 1));
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn]() {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace bimf
