#pragma once

#include <cstddef>
#include <functional>

namespace dw {

/// Worker count: `DW_THREADS` when set to a positive integer, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
/// into preallocated per-index slots and reduce afterwards in index order, so
/// results never depend on the number of workers. The first exception thrown by
/// any body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers = 0);

} // namespace dw
