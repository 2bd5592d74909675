#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qfa {

// Run `count` independent tasks on up to `jobs` workers.  Tasks must not
// share mutable state; results should be written to pre-sized slots so the
// output order is independent of scheduling.  The first task exception (by
// worker) is rethrown after all workers finish.
inline void run_parallel(int jobs, long count, const std::function<void(long)>& task) {
    if (jobs < 1) jobs = 1;
    if (long(jobs) > count) jobs = int(count);
    if (jobs <= 1) {
        for (long i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    std::vector<std::thread> pool;
    pool.reserve(size_t(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    long i = next.fetch_add(1);
                    if (i >= count) break;
                    task(i);
                }
            } catch (...) {
                errors[size_t(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qfa
