#pragma once

// Brute-force reference computations for tests. Nothing here is rigorous
// and nothing here feeds a certificate.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace cfdim::oracle {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Real = boost::multiprecision::cpp_bin_float_50;

using Word = std::vector<std::uint64_t>;

// q_{-1} = 0, q_0 = 1, q_i = w_i q_{i-1} + q_{i-2}.
BigInt continuant(const Word& w);
// |phi_w'(0)| = 1 / q_n(w)^2.
Rational word_norm(const Word& w);
// phi_w(x) = phi_{w_1}(phi_{w_2}(... phi_{w_n}(x))), phi_e(x) = 1/(e + x).
Real compose(const Word& w, const Real& x);

// Z_n(t) = sum over E^n of q(w)^{-2t}. Throws GuardExceeded if |E|^n > 10^7.
long double partition_sum(const std::vector<std::uint64_t>& E, std::size_t n, long double t);

struct DimensionBracket {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;   // extrapolated root of Z_n / Z_{n-1} = 1
  double outer_lo = 0.0;   // root of Z_n(t) = K^t (superadditivity)
  double outer_hi = 1.0;   // root of Z_n(t) = 1 (subadditivity)
  std::size_t depth = 0;
};

// Dimension of the limit set of a finite alphabet. The tight bracket comes
// from Aitken-accelerated ratio roots; outer_lo/outer_hi are the slower
// one-sided pressure bounds at the same depth.
DimensionBracket dimension_oracle(const std::vector<std::uint64_t>& E, double tol = 1e-12,
                                  std::size_t max_words = 2'000'000);

// (L_t f)(x_j) = sum_e (x_j + e)^{-2t} f(1/(x_j + e)) at x_j = j/N, j = 0..N.
std::vector<Real> collocate(const std::vector<std::uint64_t>& E, const Real& t, std::size_t N,
                            const std::function<Real(const Real&)>& f);

}  // namespace cfdim::oracle
