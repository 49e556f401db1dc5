#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace factcheck {

// Applies fn(i) for i in [0, n) across up to `workers` threads. Results land
// at their own index, so output order is independent of scheduling; the first
// exception wins and is rethrown after all workers drain.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    if (n == 0) return;
    const std::size_t thread_count =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (thread_count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int workers, Fn&& fn) {
    std::vector<T> out(n);
    parallel_for(n, workers, [&](std::size_t i) { out[i] = fn(i); });
    return out;
}

}  // namespace factcheck
