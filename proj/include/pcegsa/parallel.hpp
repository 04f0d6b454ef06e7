#pragma once

#include <cstddef>
#include <functional>

namespace pcegsa {

/// Worker count used by the row-parallel kernels. Results never depend on it.
void set_worker_threads(std::size_t n);
std::size_t worker_threads();

/// Runs body(begin, end) over a fixed partition of [0, n). The partition depends
/// only on n, so per-row outputs are identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace pcegsa
