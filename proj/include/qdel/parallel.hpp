// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace qdel {

/// Runs fn(i) for i in [0, total) over the given number of threads. Work is
/// chunked by index, so results written to index i of a pre-sized buffer are
/// identical to a serial run.
template <typename Fn>
void parallel_for(std::uint64_t total, int threads, Fn&& fn) {
    if (threads <= 1 || total < 2) {
        for (std::uint64_t i = 0; i < total; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<std::uint64_t>(threads, total));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t i = w; i < total; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace qdel
