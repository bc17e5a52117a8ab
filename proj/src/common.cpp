#include "lpm/common.hpp"

#include <atomic>
#include <thread>

namespace lpm {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
    int n = g_threads.load();
    if (n == 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for(Index begin, Index end, const std::function<void(Index)>& fn) {
    const Index total = end - begin;
    if (total <= 0) return;
    const int workers = std::min<Index>(thread_count(), total);
    if (workers <= 1) {
        for (Index i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<Index> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const Index chunk = std::max<Index>(1, total / (workers * 8));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                Index lo = next.fetch_add(chunk);
                if (lo >= end) break;
                Index hi = std::min(lo + chunk, end);
                for (Index i = lo; i < hi; ++i) fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lpm
