#include "cfdim/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "cfdim/error.hpp"

namespace cfdim::primes {
namespace {

std::mutex g_mutex;
std::vector<std::uint32_t> g_primes;
std::uint64_t g_sieved_to = 1;  // all primes <= g_sieved_to are in g_primes

// Dusart: n ln n <= p(n) (n >= 2), n(ln n + ln ln n - 1) <= p(n) (n >= 2),
// p(n) <= n(ln n + ln ln n) (n >= 6). Checked in long double with a relative
// slack far below the gaps these inequalities actually have.
void check_dusart(std::size_t n, std::uint64_t p) {
  if (n < 2) return;
  long double ln = std::log(static_cast<long double>(n));
  long double lnln = std::log(ln);
  long double pn = static_cast<long double>(p);
  long double nn = static_cast<long double>(n);
  const long double slack = 1e-12L;
  bool ok = nn * ln <= pn * (1 + slack) && nn * (ln + lnln - 1) <= pn * (1 + slack);
  if (n >= 6) ok = ok && pn <= nn * (ln + lnln) * (1 + slack);
  if (!ok) throw Error("Dusart bound violated at n=" + std::to_string(n));
}

std::uint64_t upper_estimate(std::size_t n) {
  if (n < 6) return 15;
  double ln = std::log(static_cast<double>(n));
  return static_cast<std::uint64_t>(static_cast<double>(n) * (ln + std::log(ln))) + 16;
}

// Extend the cache with all primes in (g_sieved_to, limit]. Caller holds the lock.
void sieve_to(std::uint64_t limit) {
  if (limit <= g_sieved_to) return;
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  if (root > g_sieved_to && root < limit) sieve_to(root);

  const std::uint64_t segment = 1u << 20;
  std::vector<char> mark(segment);
  std::uint64_t lo = g_sieved_to + 1;
  while (lo <= limit) {
    std::uint64_t hi = std::min(limit, lo + segment - 1);
    std::fill(mark.begin(), mark.end(), 1);
    std::size_t base_count = g_primes.size();
    for (std::size_t i = 0; i < base_count; ++i) {
      std::uint64_t p = g_primes[i];
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t m = start; m <= hi; m += p) mark[m - lo] = 0;
    }
    for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v) {
      if (mark[v - lo]) {
        g_primes.push_back(static_cast<std::uint32_t>(v));
        check_dusart(g_primes.size(), v);
      }
    }
    g_sieved_to = hi;
    lo = hi + 1;
  }
}

}  // namespace

std::vector<std::uint64_t> first(std::size_t count) {
  std::lock_guard<std::mutex> lock(g_mutex);
  while (g_primes.size() < count) {
    std::uint64_t limit = upper_estimate(count);
    if (limit > 0xFFFFFFFFull) throw ParameterError("prime cache limited to 32-bit primes");
    sieve_to(std::max(limit, g_sieved_to * 2));
  }
  return {g_primes.begin(), g_primes.begin() + static_cast<std::ptrdiff_t>(count)};
}

std::uint64_t nth(std::size_t n) {
  if (n == 0) throw ParameterError("prime index is 1-based");
  {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_primes.size() >= n) return g_primes[n - 1];
  }
  return first(n).back();
}

std::size_t cached_count() {
  std::lock_guard<std::mutex> lock(g_mutex);
  return g_primes.size();
}

}  // namespace cfdim::primes
