#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mbgk {

/// Runs fn(begin, end, chunk) over [0, n) split into `threads` contiguous chunks.
/// Chunk boundaries depend only on n and threads, so per-chunk results can be merged in order.
/// The first exception (by chunk index) is rethrown after all chunks finish.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n));
    if (t <= 1) {
        fn(std::size_t{0}, n, 0);
        return;
    }
    std::vector<std::exception_ptr> errors(t);
    std::vector<std::thread> pool;
    pool.reserve(t - 1);
    auto run = [&](std::size_t c) {
        const std::size_t b = n * c / t, e = n * (c + 1) / t;
        try {
            fn(b, e, static_cast<int>(c));
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    for (std::size_t c = 1; c < t; ++c) pool.emplace_back(run, c);
    run(0);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Thread count from MBGK_THREADS, defaulting to 1.
int default_threads();

}  // namespace mbgk
