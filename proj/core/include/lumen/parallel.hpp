// Copyright 2026 The LumenForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

namespace lumen {

/// Worker cap: LUMENFORGE_THREADS if set (and >= 1), else hardware concurrency.
int worker_count();

/// Runs fn(i) for i in [begin, end) across workers. Iterations must touch
/// disjoint state; the partitioning is deterministic but execution order is not.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace lumen
