#ifndef JSSCL_PARALLEL_HPP
#define JSSCL_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace jsscl {

// Runs fn(i) for i in [0, n) on `workers` threads. Callers write results into
// pre-sized slots indexed by i, so output is identical for any worker count.
template <class Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = n;
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!failed.exchange(true)) err = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed && err) std::rethrow_exception(err);
}

} // namespace jsscl

#endif
