#pragma once

#include <functional>

namespace szego::detail {

/// Max worker count: SZEGO_THREADS when set (clamped to >= 1), else the
/// hardware concurrency.
int thread_budget();

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; every fn(i) writes only to caller-owned slot i, so results are
/// identical for any thread count.
void parallel_for(long n, const std::function<void(long)>& fn);

} // namespace szego::detail
