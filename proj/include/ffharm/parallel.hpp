#ifndef FFHARM_PARALLEL_HPP
#define FFHARM_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ffharm {

// Global worker budget. 1 (the default) runs everything inline. Parallel
// callers must produce per-task results in preallocated slots so that the
// outcome does not depend on the schedule.
void set_thread_count(int n) noexcept;
int thread_count() noexcept;

namespace detail {
// Set while a worker (or the caller inside a parallel region) is draining
// tasks; nested parallel_tasks calls then run inline instead of spawning.
inline thread_local bool in_parallel = false;
}  // namespace detail

template <class Fn>
void parallel_tasks(std::int64_t count, Fn&& task) {
    const int workers = thread_count();
    if (workers <= 1 || count <= 1 || detail::in_parallel) {
        for (std::int64_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;  // single writer, published to the caller by join
    auto drain = [&] {
        const bool prev = detail::in_parallel;
        detail::in_parallel = true;
        for (;;) {
            const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count || failed.load(std::memory_order_relaxed)) break;
            try {
                task(i);
            } catch (...) {
                bool expect = false;
                if (failed.compare_exchange_strong(expect, true))
                    error = std::current_exception();
                break;
            }
        }
        detail::in_parallel = prev;
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::int64_t>(workers, count)) - 1;
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace ffharm

#endif
