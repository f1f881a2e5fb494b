#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cfdim {

// Directed-rounding primitives on binary64. Results bound the exact real
// value from below (_down) or above (_up). add/sub/mul/div/sqrt are exact
// directed roundings: the round-to-nearest result is corrected by one ulp
// only when an error-free transformation shows it landed on the wrong side.
namespace rnd {

double next_down(double x);
double next_up(double x);

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);

// libm exp/log are faithful but not correctly rounded; these widen the
// libm result by kLibmUlps ulps.
inline constexpr int kLibmUlps = 2;
double exp_down(double a);
double exp_up(double a);
double log_down(double a);
double log_up(double a);

}  // namespace rnd

// Closed interval [lo, hi] of finite binary64 endpoints. Every operation
// returns an enclosure of the exact set image.
//
// Width: for point inputs, +,-,*,/,sqrt widen each endpoint by at most one
// ulp and exp/log by at most kLibmUlps + 1 ulps, so an expression tree of
// depth d on point inputs has width at most 3*d ulps of its magnitude
// (before accounting for cancellation, which is inherent).
class RInterval {
 public:
  constexpr RInterval() = default;
  RInterval(double x);  // NOLINT(google-explicit-constructor): points convert implicitly
  RInterval(double lo, double hi);

  // [x, x] for x exactly representable, otherwise the two neighbouring doubles.
  static RInterval from_u64(std::uint64_t x);
  static RInterval from_i64(std::int64_t x);
  // Enclosure of num/den.
  static RInterval ratio(std::int64_t num, std::int64_t den);
  static RInterval hull(const RInterval& a, const RInterval& b);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const;  // rounded up
  bool is_point() const { return lo_ == hi_; }
  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const RInterval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool intersects(const RInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }

  RInterval& operator+=(const RInterval& o);
  RInterval& operator-=(const RInterval& o);
  RInterval& operator*=(const RInterval& o);
  RInterval& operator/=(const RInterval& o);

  std::string str(int digits = 17) const;

 private:
  struct Raw {};
  constexpr RInterval(double lo, double hi, Raw) : lo_(lo), hi_(hi) {}
  friend RInterval make_raw(double lo, double hi);

  double lo_ = 0.0;
  double hi_ = 0.0;
};

RInterval operator-(const RInterval& a);
RInterval operator+(const RInterval& a, const RInterval& b);
RInterval operator-(const RInterval& a, const RInterval& b);
RInterval operator*(const RInterval& a, const RInterval& b);
RInterval operator/(const RInterval& a, const RInterval& b);

RInterval sqr(const RInterval& a);
RInterval sqrt(const RInterval& a);
RInterval exp(const RInterval& a);
RInterval log(const RInterval& a);
// Integer power by repeated squaring; negative n takes a reciprocal.
RInterval pow(const RInterval& a, std::int64_t n);
// Real power exp(b * log a); requires a.lo > 0.
RInterval pow(const RInterval& a, const RInterval& b);
RInterval min(const RInterval& a, const RInterval& b);
RInterval max(const RInterval& a, const RInterval& b);

// a.hi < b.lo: every member of a is below every member of b.
bool certainly_lt(const RInterval& a, const RInterval& b);
bool certainly_le(const RInterval& a, const RInterval& b);
bool certainly_gt(const RInterval& a, const RInterval& b);
bool certainly_positive(const RInterval& a);
bool certainly_negative(const RInterval& a);

std::ostream& operator<<(std::ostream& os, const RInterval& x);

}  // namespace cfdim
