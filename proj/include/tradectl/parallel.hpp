#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace tradectl {

// Runs fn(i) for i in [0, n) across `jobs` threads. Tasks must not
// throw; failures are reported through the tasks' own result slots so
// the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(size_t n, int jobs, Fn&& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const size_t workers = std::min(static_cast<size_t>(jobs), n);
    pool.reserve(workers);
    for (size_t k = 0; k < workers; ++k) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tradectl
