#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dblext {

/// Number of worker threads used by exhaustive checks. Results never depend on it.
void set_worker_threads(unsigned n);
unsigned worker_threads();

/// Splits [0, n) into contiguous chunks and runs fn(begin, end) on each, one
/// thread per chunk. Returns per-chunk results in chunk order so callers can
/// aggregate deterministically.
template <class Result, class Fn>
std::vector<Result> parallel_chunks(std::size_t n, Fn fn) {
    std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(worker_threads(), n));
    std::vector<Result> results(workers);
    if (workers == 1) {
        results[0] = fn(std::size_t{0}, n);
        return results;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t step = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = std::min(n, w * step);
        std::size_t end = std::min(n, begin + step);
        threads.emplace_back([&results, &fn, w, begin, end] { results[w] = fn(begin, end); });
    }
    for (auto& t : threads) {
        t.join();
    }
    return results;
}

}  // namespace dblext
