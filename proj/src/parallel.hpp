#pragma once
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fbmre {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// Runs fn(chunk_index) for chunk_index in [0, n_chunks) on a small thread
// pool. Chunk-to-thread assignment is dynamic; determinism comes from each
// chunk owning its own RNG substream and from merging per-chunk results in
// chunk order afterwards. The first exception is rethrown on the caller.
inline void run_chunks(std::int64_t n_chunks, int workers,
                       const std::function<void(std::int64_t)>& fn) {
    workers = resolve_workers(workers);
    if (workers == 1 || n_chunks <= 1) {
        for (std::int64_t i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_chunks));
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline constexpr std::int64_t kChunkSize = 1024;

} // namespace fbmre
