#include "wasep/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wasep {

void parallel_blocks(std::int64_t n_items, int jobs, std::int64_t block_size,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n_items <= 0) return;
    if (block_size <= 0) block_size = 1;
    const std::int64_t n_blocks = (n_items + block_size - 1) / block_size;

    if (jobs <= 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) {
            const std::int64_t first = b * block_size;
            fn(first, std::min(first + block_size, n_items));
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        while (true) {
            const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) break;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (error) break;
            }
            try {
                const std::int64_t first = b * block_size;
                fn(first, std::min(first + block_size, n_items));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };

    const int n_threads = static_cast<int>(
        std::min<std::int64_t>(jobs, n_blocks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

int default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace wasep
