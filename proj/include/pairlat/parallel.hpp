// Static-partition parallel loop: thread t handles a fixed contiguous block,
// so results land in caller-indexed slots and output never depends on timing.

#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pairlat {

inline void parallel_for(long count, int threads, const std::function<void(long)>& body) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    const int used = static_cast<int>(std::min<long>(threads, count));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(used);
    const long chunk = (count + used - 1) / used;
    for (int t = 0; t < used; ++t) {
        pool.emplace_back([&, t]() {
            const long lo = t * chunk;
            const long hi = std::min(count, lo + chunk);
            try {
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace pairlat
