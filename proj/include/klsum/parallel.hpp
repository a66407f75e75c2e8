#pragma once
// Deterministic work distribution.  Ranges are cut into fixed-size blocks
// whose boundaries depend only on the range, workers claim blocks through an
// atomic cursor, each block's result lands in its own slot, and reduction
// walks the slots in block order.  Results are therefore bit-identical for
// every thread count, including one.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include <klsum/arith.hpp>
#include <klsum/error.hpp>

namespace klsum {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace detail {

template <typename Body>
void run_block_pool(u64 nblocks, unsigned threads, Body&& body) {
    if (threads <= 1 || nblocks <= 1) {
        for (u64 b = 0; b < nblocks; ++b) body(b);
        return;
    }
    std::atomic<u64> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_lock;
    auto worker = [&] {
        for (;;) {
            const u64 b = cursor.fetch_add(1, std::memory_order_relaxed);
            if (b >= nblocks || failed.load(std::memory_order_relaxed)) return;
            try {
                body(b);
            } catch (...) {
                std::lock_guard<std::mutex> g(error_lock);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(
        std::min<u64>(threads, nblocks));
    pool.reserve(spawn);
    for (unsigned i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Applies fn(i) for i in [begin, end) and returns the results in index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(u64 begin, u64 end, unsigned threads, Fn&& fn) {
    if (end <= begin) return {};
    const u64 count = end - begin;
    std::vector<T> out(count);
    constexpr u64 kBlock = 16;
    const u64 nblocks = (count + kBlock - 1) / kBlock;
    detail::run_block_pool(nblocks, resolve_threads(threads), [&](u64 b) {
        const u64 lo = begin + b * kBlock;
        const u64 hi = std::min(end, lo + kBlock);
        for (u64 i = lo; i < hi; ++i) out[i - begin] = fn(i);
    });
    return out;
}

// Splits [begin, end) into fixed blocks of block_size indices, evaluates
// block_fn(lo, hi) on each, and combines the partial results with += in
// ascending block order.
template <typename T, typename BlockFn>
T parallel_block_reduce(u64 begin, u64 end, u64 block_size, unsigned threads, T init,
                        BlockFn&& block_fn) {
    if (block_size == 0) throw Error(errc::config_invalid, "block size must be positive");
    if (end <= begin) return init;
    const u64 count = end - begin;
    const u64 nblocks = (count + block_size - 1) / block_size;
    std::vector<T> partials(nblocks, init);
    detail::run_block_pool(nblocks, resolve_threads(threads), [&](u64 b) {
        const u64 lo = begin + b * block_size;
        const u64 hi = std::min(end, lo + block_size);
        partials[b] = block_fn(lo, hi);
    });
    T acc = init;
    for (u64 b = 0; b < nblocks; ++b) acc += partials[b];
    return acc;
}

}  // namespace klsum
