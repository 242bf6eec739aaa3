#ifndef HRC_PARALLEL_HPP
#define HRC_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hrc {

// Resolves a worker count: explicit request > HRC_THREADS > hardware.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HRC_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(block_index, begin, end) over fixed-size blocks of [0, n).
// The partition depends only on n and grain, never on the worker count, so
// callers that write per-block (or per-item) slots and combine blocks in
// index order get bit-identical results for any thread count.
template <class Fn>
void parallel_for_blocks(std::size_t n, std::size_t grain, int threads, Fn&& fn) {
    if (n == 0) return;
    if (grain == 0) grain = 1;
    const std::size_t n_blocks = (n + grain - 1) / grain;
    threads = resolve_threads(threads);
    if (threads <= 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b, b * grain, std::min(n, (b + 1) * grain));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) break;
            fn(b, b * grain, std::min(n, (b + 1) * grain));
        }
    };
    std::size_t n_workers = std::min<std::size_t>(threads, n_blocks);
    std::vector<std::thread> pool;
    pool.reserve(n_workers - 1);
    for (std::size_t i = 0; i + 1 < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

inline std::size_t block_count(std::size_t n, std::size_t grain) {
    return n == 0 ? 0 : (n + grain - 1) / grain;
}

}  // namespace hrc

#endif  // HRC_PARALLEL_HPP
