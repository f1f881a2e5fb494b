#include "cfdim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cfdim/error.hpp"

namespace cfdim::oracle {
namespace {

constexpr double kGuard = 1e7;

double word_count(std::size_t letters, std::size_t n) { return std::pow(static_cast<double>(letters), static_cast<double>(n)); }

// log q(w) for every word of length d, for each d in [dmin, n]. Depth-first
// with the continuant carried along, split by first letter across threads.
std::vector<std::vector<double>> log_continuants(const std::vector<std::uint64_t>& E, std::size_t dmin, std::size_t n) {
  const std::size_t k = E.size();
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(k, hw);
  std::vector<std::vector<std::vector<double>>> parts(workers, std::vector<std::vector<double>>(n + 1));

  auto run = [&](std::size_t tid) {
    auto& out = parts[tid];
    // d = length of the word ending in the letter just appended
    std::function<void(std::size_t, long double, long double)> rec = [&](std::size_t d, long double prev, long double cur) {
      for (std::uint64_t e : E) {
        long double next = static_cast<long double>(e) * cur + prev;
        if (d + 1 >= dmin) out[d + 1].push_back(static_cast<double>(std::log(next)));
        if (d + 1 < n) rec(d + 1, cur, next);
      }
    };
    for (std::size_t first = tid; first < k; first += workers) {
      long double q1 = static_cast<long double>(E[first]);
      if (dmin <= 1) out[1].push_back(static_cast<double>(std::log(q1)));
      if (n > 1) rec(1, 1.0L, q1);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& th : pool) th.join();

  std::vector<std::vector<double>> logs(n + 1);
  if (dmin == 0) logs[0].push_back(0.0);
  for (std::size_t d = std::max<std::size_t>(dmin, 1); d <= n; ++d) {
    for (auto& p : parts) logs[d].insert(logs[d].end(), p[d].begin(), p[d].end());
  }
  return logs;
}

struct Sum {
  long double z = 0;   // sum e^{-2tL}
  long double dz = 0;  // derivative in t
};

Sum evaluate(const std::vector<double>& logs, double t) {
  Sum s;
  for (double L : logs) {
    long double v = std::exp(-2.0 * t * L);
    s.z += v;
    s.dz -= 2.0L * L * v;
  }
  return s;
}

// Root in t of ln Z_a(t) - ln Z_b(t) - c t, safeguarded Newton. Z_b may be
// absent (empty pointer) for the pressure bounds.
double solve(const std::vector<double>& a, const std::vector<double>* b, double c, double tol) {
  auto f = [&](double t, double* df) {
    Sum sa = evaluate(a, t);
    long double v = std::log(sa.z) - c * t;
    long double d = sa.dz / sa.z - c;
    if (b) {
      Sum sb = evaluate(*b, t);
      v -= std::log(sb.z);
      d -= sb.dz / sb.z;
    }
    if (df) *df = static_cast<double>(d);
    return static_cast<double>(v);
  };
  double lo = 0.0, hi = 1.0;
  while (f(hi, nullptr) > 0) {
    lo = hi;
    hi *= 2;
    if (hi > 64) throw Error("oracle root not bracketed");
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double df = 0;
    double v = f(t, &df);
    if (v > 0) {
      lo = t;
    } else {
      hi = t;
    }
    double next = df != 0 ? t - v / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - t) < 0.25 * tol) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

double aitken(double x0, double x1, double x2) {
  double d1 = x1 - x0, d2 = x2 - x1, den = d2 - d1;
  if (den == 0 || !std::isfinite(den)) return x2;
  double a = x2 - d2 * d2 / den;
  return std::isfinite(a) ? a : x2;
}

}  // namespace

BigInt continuant(const Word& w) {
  BigInt prev = 0, cur = 1;
  for (std::uint64_t e : w) {
    BigInt next = BigInt(e) * cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Rational word_norm(const Word& w) {
  BigInt q = continuant(w);
  return Rational(BigInt(1), q * q);
}

Real compose(const Word& w, const Real& x) {
  Real y = x;
  for (auto it = w.rbegin(); it != w.rend(); ++it) y = Real(1) / (Real(*it) + y);
  return y;
}

long double partition_sum(const std::vector<std::uint64_t>& E, std::size_t n, long double t) {
  if (E.empty()) throw ParameterError("empty alphabet");
  if (n == 0) return 1.0L;
  if (word_count(E.size(), n) > kGuard) throw GuardExceeded("partition sum over more than 1e7 words");
  auto logs = log_continuants(E, n, n);
  long double z = 0;
  for (double L : logs[n]) z += std::exp(-2.0L * t * static_cast<long double>(L));
  return z;
}

DimensionBracket dimension_oracle(const std::vector<std::uint64_t>& E, double tol, std::size_t max_words) {
  if (E.empty()) throw ParameterError("empty alphabet");
  std::vector<std::uint64_t> sorted = E;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  DimensionBracket out;
  if (sorted.size() == 1) {
    out.lo = 0.0;
    out.hi = tol;
    out.outer_lo = 0.0;
    out.outer_hi = tol;
    return out;
  }
  if (static_cast<double>(max_words) > kGuard) throw GuardExceeded("oracle word budget above 1e7");
  std::size_t n = 1;
  while (n < 40 && word_count(sorted.size(), n + 1) <= static_cast<double>(max_words)) ++n;
  if (n < 6) throw GuardExceeded("word budget too small for the oracle depth");
  out.depth = n;

  auto logs = log_continuants(sorted, n - 6, n);
  // h_d: root of Z_d = Z_{d-1}, for d = n-4 .. n
  double h[5];
  for (int i = 0; i < 5; ++i) {
    std::size_t d = n - 4 + static_cast<std::size_t>(i);
    h[i] = solve(logs[d], &logs[d - 1], 0.0, tol);
  }
  double a_prev = aitken(h[1], h[2], h[3]);
  double a_last = aitken(h[2], h[3], h[4]);
  double delta = std::max({std::fabs(a_last - a_prev), 1e-13, 0.5 * tol});
  out.estimate = a_last;

  const double lnK = sorted.front() == 1 ? std::log(4.0) : 2.0 / (static_cast<double>(sorted.front()) * sorted.front() - 1.0);
  out.outer_hi = solve(logs[n], nullptr, 0.0, tol);
  out.outer_lo = solve(logs[n], nullptr, lnK, tol);
  out.lo = std::max(out.outer_lo, a_last - delta);
  out.hi = std::min(out.outer_hi, a_last + delta);
  return out;
}

std::vector<Real> collocate(const std::vector<std::uint64_t>& E, const Real& t, std::size_t N,
                            const std::function<Real(const Real&)>& f) {
  if (N == 0) throw ParameterError("collocation needs N >= 1");
  std::vector<Real> out(N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    Real x = Real(j) / Real(N);
    Real acc = 0;
    for (std::uint64_t e : E) {
      Real s = x + Real(e);
      acc += boost::multiprecision::pow(s, -2 * t) * f(1 / s);
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace cfdim::oracle
