#include "dscim/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace dscim {

namespace {

int g_override = 0;

int env_threads() {
    if (const char* env = std::getenv("DSCIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int thread_count() { return g_override > 0 ? g_override : env_threads(); }

void set_thread_count(int n) { g_override = n > 0 ? n : 0; }

void parallel_for(long long n, const std::function<void(long long)>& fn) {
    if (n <= 0) return;
    const int workers = static_cast<int>(std::min<long long>(thread_count(), n));
    if (workers <= 1) {
        for (long long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const long long i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace dscim
