#pragma once

// Deterministic index-space parallelism: the body writes results into
// preallocated per-index slots, so the outcome is independent of the thread
// count and of scheduling.

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wavelab {

template <class Body>
void parallel_for(std::size_t n, int n_threads, const Body& body) {
    if (n_threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(n_threads), n);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wavelab
