#ifndef COUNTDIFF_PARALLEL_HPP
#define COUNTDIFF_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace countdiff {

/// Worker count: COUNTDIFF_THREADS if set to a positive number, otherwise the
/// hardware concurrency.
inline unsigned worker_count() {
    if (const char *env = std::getenv("COUNTDIFF_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception &) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// out[i] = f(i) for i < count. Results are stored by index, so the output
/// does not depend on scheduling. The first exception by index is rethrown.
template <class T, class F> std::vector<T> parallel_map(std::size_t count, F f) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    const unsigned workers = std::min<std::size_t>(worker_count(), count == 0 ? 1 : count);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto &t : pool) t.join();
    }
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace countdiff

#endif // COUNTDIFF_PARALLEL_HPP
