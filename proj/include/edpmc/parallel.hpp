#pragma once

#include <Eigen/Core>

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace edpmc {

// Static-partition parallel loop. Each index must write only its own output
// slot, so results are identical for any thread count.
inline void parallel_for(Eigen::Index n, int threads,
                         const std::function<void(Eigen::Index)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || n <= 1) {
        for (Eigen::Index i = 0; i < n; ++i) body(i);
        return;
    }
    const int workers = static_cast<int>(std::min<Eigen::Index>(threads, n));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (Eigen::Index i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace edpmc
