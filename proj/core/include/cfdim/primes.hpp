#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cfdim::primes {

// The first `count` primes, from a process-wide segmented-sieve cache that
// grows on demand. Thread-safe. Every prime added to the cache is checked
// against the Dusart inequalities; a violation throws (it would mean the
// analytic tail bounds rest on a false premise).
std::vector<std::uint64_t> first(std::size_t count);

// p(n), 1-based.
std::uint64_t nth(std::size_t n);

// Number of primes currently cached.
std::size_t cached_count();

}  // namespace cfdim::primes
