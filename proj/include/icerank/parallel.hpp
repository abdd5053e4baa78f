#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace icerank {

/// Runs body(begin, end) over contiguous index blocks of [0, count) on up to
/// `workers` threads. Each index is visited exactly once; callers write only
/// to slots they own, so results never depend on the worker count.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    if (workers <= 1 || count < 2) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t blocks = std::min<std::size_t>(workers, count);
    const std::size_t step = (count + blocks - 1) / blocks;
    std::vector<std::exception_ptr> failures(blocks);
    std::vector<std::thread> threads;
    threads.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t begin = b * step;
        const std::size_t end = std::min(count, begin + step);
        if (begin >= end) break;
        threads.emplace_back([&, b, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                failures[b] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
}

}  // namespace icerank
