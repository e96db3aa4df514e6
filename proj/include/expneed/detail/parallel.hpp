#ifndef EXPNEED_DETAIL_PARALLEL_HPP
#define EXPNEED_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace expneed::detail {

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written to slot i by the body; the first exception (lowest index) is
/// rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, std::size_t jobs, Body&& body) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = n;

    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < first_error_index) {
                    first_error_index = i;
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    pool.clear();  // joins
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace expneed::detail

#endif
