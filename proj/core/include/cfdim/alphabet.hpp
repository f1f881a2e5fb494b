#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfdim/rinterval.hpp"

namespace cfdim {

struct Explicit {
  std::vector<std::uint64_t> elems;  // distinct, increasing
};

// {s, s+q, s+2q, ...}
struct ArithmeticProgression {
  std::uint64_t s = 1;
  std::uint64_t q = 1;
};

struct Primes {};

// {1, 4, 9, ...}
struct Squares {};

// {lambda, lambda^2, ...}, optionally preceded by 1.
struct Powers {
  std::uint64_t lambda = 2;
  bool include_one = false;
};

// {lambda^n / r : n >= 1}, requires r | lambda.
struct ScaledPowers {
  std::uint64_t r = 1;
  std::uint64_t lambda = 2;
};

// {b^(n^2) : n >= 1}
struct Lacunary {
  std::uint64_t b = 2;
};

using Family = std::variant<Explicit, ArithmeticProgression, Primes, Squares, Powers, ScaledPowers, Lacunary>;

// One alphabet element e_n. `value` is exact when `fits` (e_n < 2^64);
// `iv` and `log` enclose e_n and ln e_n in every case.
struct Letter {
  std::uint64_t value = 0;
  bool fits = false;
  RInterval iv;
  RInterval log;
};

class Alphabet {
 public:
  explicit Alphabet(Family family);

  // Accepts short descriptors ("powers:2", "ap:1,2", "explicit:1,4,9",
  // "scaledpowers:50,100", "lacunary:2", "primes", "squares", "odd", "even",
  // "powers+:3" for {1,3,9,...}) and key=value configs
  // ("family=ap s=1 q=2", "family=powers lambda=2 include_one=false").
  static Alphabet parse(std::string_view text);

  const Family& family() const { return family_; }
  bool is_finite() const;
  std::optional<std::size_t> size() const;
  std::uint64_t min_element() const;
  bool contains_one() const;
  // Convergence exponent: sum e_n^{-2t} is finite exactly for t > theta.
  double theta() const;
  // Canonical short descriptor, round-trips through parse().
  std::string descriptor() const;

  // First `count` elements; throws LengthError past the end of a finite
  // alphabet and DomainError if an element does not fit in 64 bits.
  std::vector<std::uint64_t> enumerate(std::size_t count) const;
  // e_n, 1-based.
  Letter letter(std::size_t n) const;
  std::vector<Letter> letters(std::size_t count) const;
  // Enclosure of e_n^{-2t}, computed from ln e_n so huge letters are fine.
  RInterval letter_power(std::size_t n, const RInterval& t) const;

  // The finite subsystem of the first M letters as an Explicit alphabet.
  Alphabet truncated(std::size_t M) const;

 private:
  Family family_;
};

// Upper bound K on the distortion constant: 4 when 1 is a letter, otherwise
// exp(2 / (k^2 - 1)) with k the least letter.
RInterval distortion_bound(const Alphabet& a);

// Enclosure of 2 ln((k + sqrt(k^2 + 4)) / 2); only its lower end is a
// valid Lyapunov bound.
RInterval lyapunov_lower_bound(const Alphabet& a);

// Certified upper bound on sum_{n > M} e_n^{-2t}.
RInterval tail_sum_upper(const Alphabet& a, std::size_t M, const RInterval& t);

// Certified lower bound on sum_{n > k} (e_n + shift)^{-2s}: an explicit
// partial sum spliced with the family's analytic integral-test tail.
RInterval tail_sum_lower(const Alphabet& a, std::size_t k, const RInterval& s, std::uint64_t shift = 0);

// Number of explicit terms tail_sum_lower sums before switching to the
// analytic tail.
std::size_t explicit_terms(const Alphabet& a);

}  // namespace cfdim
