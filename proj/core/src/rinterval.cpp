#include "cfdim/rinterval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "cfdim/error.hpp"

namespace cfdim {
namespace rnd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the fma residual may itself underflow, so the
// correction step is replaced by an unconditional one-ulp nudge.
constexpr double kTiny = 0x1p-969;

double checked(double x) {
  if (!std::isfinite(x)) throw DomainError("interval arithmetic overflow");
  return x;
}

// Error term of a + b = s + err (exact for finite s).
double two_sum_err(double a, double b, double s) {
  double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

}  // namespace

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

double add_down(double a, double b) {
  double s = checked(a + b);
  return two_sum_err(a, b, s) < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  double s = checked(a + b);
  return two_sum_err(a, b, s) > 0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = checked(a * b);
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  double p = checked(a * b);
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0 ? checked(next_up(p)) : p;
}

double div_down(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  if (a == 0.0) return 0.0;
  double q = checked(a / b);
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  // a/b - q = r/b with r = a - q*b computed exactly.
  double r = std::fma(-q, b, a);
  if (r == 0.0) return q;
  return ((r < 0) != (b < 0)) ? next_down(q) : q;
}

double div_up(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  if (a == 0.0) return 0.0;
  double q = checked(a / b);
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  double r = std::fma(-q, b, a);
  if (r == 0.0) return q;
  return ((r < 0) == (b < 0)) ? checked(next_up(q)) : q;
}

double sqrt_down(double a) {
  if (a < 0) throw DomainError("sqrt of negative number");
  if (a == 0.0) return 0.0;
  double r = std::sqrt(a);
  if (a < kTiny) return std::max(0.0, next_down(r));
  return std::fma(-r, r, a) < 0 ? next_down(r) : r;
}

double sqrt_up(double a) {
  if (a < 0) throw DomainError("sqrt of negative number");
  if (a == 0.0) return 0.0;
  double r = std::sqrt(a);
  if (a < kTiny) return next_up(r);
  return std::fma(-r, r, a) > 0 ? next_up(r) : r;
}

double exp_down(double a) {
  if (a == 0.0) return 1.0;
  double y = checked(std::exp(a));
  for (int i = 0; i < kLibmUlps; ++i) y = next_down(y);
  return std::max(y, 0.0);
}

double exp_up(double a) {
  if (a == 0.0) return 1.0;
  double y = checked(std::exp(a));
  for (int i = 0; i < kLibmUlps; ++i) y = next_up(y);
  return checked(y);
}

double log_down(double a) {
  if (!(a > 0)) throw DomainError("log of non-positive number");
  if (a == 1.0) return 0.0;
  double y = std::log(a);
  for (int i = 0; i < kLibmUlps; ++i) y = next_down(y);
  return y;
}

double log_up(double a) {
  if (!(a > 0)) throw DomainError("log of non-positive number");
  if (a == 1.0) return 0.0;
  double y = std::log(a);
  for (int i = 0; i < kLibmUlps; ++i) y = next_up(y);
  return y;
}

}  // namespace rnd

RInterval make_raw(double lo, double hi) { return RInterval(lo, hi, RInterval::Raw{}); }

RInterval::RInterval(double x) : lo_(x), hi_(x) {
  if (!std::isfinite(x)) throw DomainError("interval endpoint is not finite");
}

RInterval::RInterval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("interval endpoint is not finite");
  if (lo > hi) throw DomainError("interval with lo > hi");
}

RInterval RInterval::from_u64(std::uint64_t x) {
  double d = static_cast<double>(x);
  long double exact = static_cast<long double>(x);
  long double rounded = static_cast<long double>(d);
  if (rounded < exact) return make_raw(d, rnd::next_up(d));
  if (rounded > exact) return make_raw(rnd::next_down(d), d);
  return make_raw(d, d);
}

RInterval RInterval::from_i64(std::int64_t x) {
  if (x >= 0) return from_u64(static_cast<std::uint64_t>(x));
  // -(x+1) avoids overflow at INT64_MIN.
  RInterval m = from_u64(static_cast<std::uint64_t>(-(x + 1))) + RInterval(1.0);
  return -m;
}

RInterval RInterval::ratio(std::int64_t num, std::int64_t den) { return from_i64(num) / from_i64(den); }

RInterval RInterval::hull(const RInterval& a, const RInterval& b) {
  return make_raw(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_));
}

double RInterval::mid() const { return 0.5 * lo_ + 0.5 * hi_; }

double RInterval::width() const { return rnd::sub_up(hi_, lo_); }

RInterval& RInterval::operator+=(const RInterval& o) { return *this = *this + o; }
RInterval& RInterval::operator-=(const RInterval& o) { return *this = *this - o; }
RInterval& RInterval::operator*=(const RInterval& o) { return *this = *this * o; }
RInterval& RInterval::operator/=(const RInterval& o) { return *this = *this / o; }

std::string RInterval::str(int digits) const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.*g, %.*g]", digits, lo_, digits, hi_);
  return buf;
}

RInterval operator-(const RInterval& a) { return make_raw(-a.hi(), -a.lo()); }

RInterval operator+(const RInterval& a, const RInterval& b) {
  return make_raw(rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi()));
}

RInterval operator-(const RInterval& a, const RInterval& b) {
  return make_raw(rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo()));
}

RInterval operator*(const RInterval& a, const RInterval& b) {
  if (a.lo() >= 0 && b.lo() >= 0) {
    return make_raw(rnd::mul_down(a.lo(), b.lo()), rnd::mul_up(a.hi(), b.hi()));
  }
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    for (double y : ys) {
      lo = std::min(lo, rnd::mul_down(x, y));
      hi = std::max(hi, rnd::mul_up(x, y));
    }
  }
  return make_raw(lo, hi);
}

RInterval operator/(const RInterval& a, const RInterval& b) {
  if (b.lo() <= 0 && b.hi() >= 0) throw DomainError("division by an interval containing zero");
  const double xs[2] = {a.lo(), a.hi()};
  const double ys[2] = {b.lo(), b.hi()};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : xs) {
    for (double y : ys) {
      lo = std::min(lo, rnd::div_down(x, y));
      hi = std::max(hi, rnd::div_up(x, y));
    }
  }
  return make_raw(lo, hi);
}

RInterval sqr(const RInterval& a) {
  if (a.lo() >= 0) return make_raw(rnd::mul_down(a.lo(), a.lo()), rnd::mul_up(a.hi(), a.hi()));
  if (a.hi() <= 0) return make_raw(rnd::mul_down(a.hi(), a.hi()), rnd::mul_up(a.lo(), a.lo()));
  return make_raw(0.0, std::max(rnd::mul_up(a.lo(), a.lo()), rnd::mul_up(a.hi(), a.hi())));
}

RInterval sqrt(const RInterval& a) {
  if (a.lo() < 0) throw DomainError("sqrt of interval with negative part");
  return make_raw(rnd::sqrt_down(a.lo()), rnd::sqrt_up(a.hi()));
}

RInterval exp(const RInterval& a) { return make_raw(rnd::exp_down(a.lo()), rnd::exp_up(a.hi())); }

RInterval log(const RInterval& a) {
  if (!(a.lo() > 0)) throw DomainError("log of interval with non-positive part");
  return make_raw(rnd::log_down(a.lo()), rnd::log_up(a.hi()));
}

RInterval pow(const RInterval& a, std::int64_t n) {
  if (n == 0) return RInterval(1.0);
  if (n < 0) {
    // -(n+1) then +1 avoids overflow at INT64_MIN.
    return RInterval(1.0) / (pow(a, -(n + 1)) * a);
  }
  RInterval result(1.0);
  RInterval base = a;
  auto e = static_cast<std::uint64_t>(n);
  while (true) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e == 0) break;
    base = sqr(base);
  }
  return result;
}

RInterval pow(const RInterval& a, const RInterval& b) {
  if (!(a.lo() > 0)) throw DomainError("pow with non-positive base");
  return exp(b * log(a));
}

RInterval min(const RInterval& a, const RInterval& b) {
  return make_raw(std::min(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
}

RInterval max(const RInterval& a, const RInterval& b) {
  return make_raw(std::max(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

bool certainly_lt(const RInterval& a, const RInterval& b) { return a.hi() < b.lo(); }
bool certainly_le(const RInterval& a, const RInterval& b) { return a.hi() <= b.lo(); }
bool certainly_gt(const RInterval& a, const RInterval& b) { return a.lo() > b.hi(); }
bool certainly_positive(const RInterval& a) { return a.lo() > 0; }
bool certainly_negative(const RInterval& a) { return a.hi() < 0; }

std::ostream& operator<<(std::ostream& os, const RInterval& x) { return os << x.str(); }

}  // namespace cfdim
