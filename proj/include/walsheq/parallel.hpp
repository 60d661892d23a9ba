#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace walsheq {

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// claimed dynamically; callers keep results per item so that any reduction
/// over them is independent of the schedule.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(count, 1u << 16))));
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < count; i = next++) body(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

/// Splits [0, total) into fixed contiguous chunks (the split depends only on
/// total and chunk count), maps each chunk, and sums the partials in order.
template <class T, class ChunkFn>
T chunked_sum(std::size_t total, std::size_t chunks, unsigned threads, ChunkFn&& fn) {
    chunks = std::max<std::size_t>(1, std::min(chunks, total == 0 ? 1 : total));
    std::vector<T> partial(chunks, T{});
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t begin = total * c / chunks;
        const std::size_t end = total * (c + 1) / chunks;
        partial[c] = fn(begin, end);
    });
    T sum{};
    for (const T& p : partial) sum += p;
    return sum;
}

}  // namespace walsheq
