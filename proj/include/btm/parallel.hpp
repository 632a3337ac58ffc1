#pragma once
// Deterministic fork-join over an index range. Workers get contiguous
// blocks and must write results into per-index slots; with counter-based
// RNG streams this makes every experiment independent of the thread count.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace btm {

inline int default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

inline void parallel_for(uint64_t n, int threads,
                         const std::function<void(uint64_t, uint64_t)>& block_fn) {
    if (n == 0) return;
    uint64_t nt = static_cast<uint64_t>(std::max(1, threads));
    nt = std::min<uint64_t>(nt, n);
    if (nt == 1) {
        block_fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    uint64_t per = n / nt;
    uint64_t rem = n % nt;
    uint64_t begin = 0;
    for (uint64_t t = 0; t < nt; ++t) {
        uint64_t len = per + (t < rem ? 1 : 0);
        uint64_t end = begin + len;
        pool.emplace_back([&block_fn, begin, end] { block_fn(begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
}

}  // namespace btm
