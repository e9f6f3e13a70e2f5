#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace semidens {

// Worker count for replication-level parallelism, from SEMIDENS_WORKERS
// (default: hardware concurrency). The partition never affects results:
// callers write into per-index slots and reduce in index order.
inline unsigned worker_count() {
    if (const char* env = std::getenv("SEMIDENS_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <class Fn>
void parallel_for(std::size_t count, const Fn& fn,
                  unsigned workers = worker_count()) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace semidens
