#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace epo {

// Worker-thread count used by the block helpers below. Results are
// identical for any setting: blocks have fixed boundaries and every block
// writes to its own slots, so only wall-clock time depends on this.
inline int& worker_thread_count() {
    static int n = 1;
    return n;
}

inline void set_worker_threads(int n) { worker_thread_count() = n < 1 ? 1 : n; }

constexpr std::size_t kPathBlock = 4096;

// Runs fn(begin, end) over fixed-size blocks of [0, n).
template <typename Fn>
void parallel_blocks(std::size_t n, std::size_t block_size, Fn&& fn) {
    if (n == 0) return;
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    const int threads = worker_thread_count();
    if (threads <= 1 || n_blocks <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            fn(b * block_size, std::min(n, (b + 1) * block_size));
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(threads, n_blocks);
    pool.reserve(spawn);
    for (int t = 0; t < spawn - 1; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

} // namespace epo
