#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nonsaddle {

// Worker count: NONSADDLE_THREADS wins, else hardware concurrency.
inline int thread_count() {
    if (const char* e = std::getenv("NONSADDLE_THREADS")) {
        int v = std::atoi(e);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Static range split, fn(begin, end) per worker. Callers write to disjoint
// preallocated slots, so results do not depend on the thread count.
template <class F>
void parallel_for(int64_t n, F&& fn, int threads = 0) {
    if (threads <= 0) threads = thread_count();
    if (n < 1) return;
    threads = static_cast<int>(std::min<int64_t>(threads, n));
    if (threads <= 1) {
        fn(int64_t{0}, n);
        return;
    }
    const int64_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const int64_t b = t * chunk;
        const int64_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

} // namespace nonsaddle
