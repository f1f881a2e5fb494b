#pragma once

#include <cstddef>
#include <functional>

namespace cfdim {

// CFDIM_WORKERS if set to a positive integer, else hardware concurrency.
unsigned default_workers();

// Calls body(begin, end) on contiguous chunks of [0, n) from up to
// `workers` threads (0 means default_workers()). Exceptions thrown by any
// chunk are rethrown on the caller's thread.
void parallel_chunks(std::size_t n, unsigned workers, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace cfdim
