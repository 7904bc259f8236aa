#include "ffharm/parallel.hpp"

namespace ffharm {

namespace {
std::atomic<int> g_thread_count{1};
}

void set_thread_count(int n) noexcept {
    g_thread_count.store(n < 1 ? 1 : n, std::memory_order_relaxed);
}

int thread_count() noexcept { return g_thread_count.load(std::memory_order_relaxed); }

}  // namespace ffharm
