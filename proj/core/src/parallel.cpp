// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#include "lumen/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lumen {

int worker_count() {
    if (const char* env = std::getenv("LUMENFORGE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int count = end - begin;
    if (count <= 0) return;
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int> next{begin};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < end; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace lumen
