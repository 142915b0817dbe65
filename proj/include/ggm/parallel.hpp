#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ggm {

/// Runs body(0..count-1) on up to `jobs` threads. Work items are claimed
/// from an atomic counter, so any assignment of items to threads is
/// possible; callers must write results into per-index slots to stay
/// deterministic. The first exception thrown by a body is rethrown on the
/// calling thread after all workers join. jobs <= 1 runs inline.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
    if (count <= 0) return;
    if (jobs <= 1 || count == 1) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    const int workers = std::min(jobs, count);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const int k = next.fetch_add(1, std::memory_order_relaxed);
                if (k >= count) break;
                try {
                    body(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Default job count: GGM_JOBS env var when set, otherwise the hardware
/// concurrency (at least 1).
inline int default_jobs() {
    if (const char* env = std::getenv("GGM_JOBS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace ggm
