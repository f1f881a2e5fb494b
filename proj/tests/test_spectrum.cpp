#include <doctest.h>

#include <cmath>

#include "cfdim/error.hpp"
#include "cfdim/spectrum.hpp"

using namespace cfdim;

namespace {

Alphabet A(const char* d) { return Alphabet::parse(d); }

bool covers(const SpectrumReport& r, double lo, double hi) {
  for (const auto& [a, b] : r.merged)
    if (a <= lo && hi <= b) return true;
  return false;
}

}  // namespace

TEST_CASE("alpha and beta at r = 1/2 and their ordering") {
  for (std::uint64_t n : {1, 2, 3, 7, 100, 12345}) {
    CAPTURE(n);
    CHECK(AlphaBeta::alpha(n, RInterval(0.5)).contains(1.0 / static_cast<double>(n + 1)));
    CHECK(AlphaBeta::beta(n, RInterval(0.5)).contains(2.0 / static_cast<double>(n + 2)));
    for (double r : {0.05, 0.3, 0.8, 1.0}) CHECK(certainly_lt(AlphaBeta::alpha(n, RInterval(r)), AlphaBeta::beta(n, RInterval(r))));
  }
  // 1/2 and 2/3 are exact after squaring back
  RInterval a1 = AlphaBeta::alpha(1, RInterval(0.5));
  CHECK(a1.contains(0.5));
  CHECK(a1.width() < 1e-15);
}

TEST_CASE("ab sum condition") {
  // letters are 1-based: e_2 = 3 is the first odd letter after 1
  CHECK(check_sum_condition_ab(A("odd"), RInterval(0.822), 2));
  CHECK_FALSE(check_sum_condition_ab(A("odd"), RInterval(0.822), 1));
  CHECK(check_sum_condition_ab(A("squares"), RInterval(0.5766), 3));
  CHECK_FALSE(check_sum_condition_ab(A("powers:2"), RInterval(0.6), 2));
}

TEST_CASE("derivative sum condition") {
  CHECK(check_sum_condition_deriv(A("even"), RInterval(0.72), 2));
  CHECK(check_sum_condition_deriv(A("primes"), RInterval(0.6752), 9));
  CHECK_FALSE(check_sum_condition_deriv(A("primes"), RInterval(0.6752), 2));
  CHECK_FALSE(check_sum_condition_deriv(A("powers:2"), RInterval(0.5), 2));
  CHECK_THROWS_AS(check_sum_condition_deriv(A("odd"), RInterval(0.5), 2), DivergenceError);
}

TEST_CASE("monotone transfer of the ab condition") {
  CHECK(monotone_transfer_check(A("odd"), 0.822, 0.51, 2));
  for (double s = 0.51; s <= 0.822; s += 0.02) CHECK(check_sum_condition_ab(A("odd"), RInterval(s), 2));
  CHECK(monotone_transfer_check(A("even"), 0.7, 0.7, 1) == check_sum_condition_ab(A("even"), RInterval(0.7), 1));
  CHECK(monotone_transfer_check(A("squares"), 0.5766, 0.4112, 3));
  for (double s = 0.26; s <= 0.5766; s += 0.02) CHECK(check_sum_condition_ab(A("squares"), RInterval(s), 3));
  CHECK_THROWS_AS(monotone_transfer_check(A("odd"), 0.6, 0.7, 2), ParameterError);
}

TEST_CASE("downward closure on grids") {
  for (const char* d : {"odd", "even", "ap:1,3", "ap:2,3", "squares", "primes"}) {
    CAPTURE(d);
    Alphabet a = A(d);
    const double lo = a.theta() + 0.01;
    for (std::size_t k = 1; k <= 6; ++k) {
      bool seen_true = false;
      for (double s = 0.95; s >= lo; s -= 0.03) {
        bool holds = check_sum_condition_ab(a, RInterval(s), k);
        if (seen_true) CHECK(holds);
        seen_true = seen_true || holds;
      }
    }
  }
}

TEST_CASE("conditions for all k") {
  auto odd = find_all_k(A("odd"), SumCriterion::AB, 0.822);
  REQUIRE(odd);
  CHECK(odd->k0 == 2);
  CHECK(verify_all_k(A("odd"), *odd));
  auto even = find_all_k(A("even"), SumCriterion::AB, 0.7195);
  REQUIRE(even);
  CHECK(even->k0 == 1);
  auto primes = find_all_k(A("primes"), SumCriterion::Deriv, 0.6752);
  REQUIRE(primes);
  CHECK(primes->k0 == 3);
  CHECK(verify_all_k(A("primes"), *primes));
  auto sq = find_all_k(A("squares"), SumCriterion::AB, 0.5982);
  REQUIRE(sq);
  CHECK(sq->k0 == 4);
  CHECK_FALSE(find_all_k(A("powers:2"), SumCriterion::Deriv, 0.47));

  // a tampered certificate does not verify
  AllKCertificate bad = *odd;
  bad.k0 = 1;
  CHECK_FALSE(verify_all_k(A("odd"), bad));
}

TEST_CASE("power thresholds") {
  struct Case {
    std::uint64_t lambda, r;
    double root;
  };
  for (const Case c : {Case{2, 1, 0.310246315358707}, Case{3, 1, 0.238921541096510}, Case{4, 1, 0.197744747993607},
                       Case{5, 1, 0.172970834447512}, Case{100, 50, 0.058557794057822}}) {
    CAPTURE(c.lambda);
    RInterval s = power_threshold(c.lambda, c.r);
    CHECK(s.lo() <= c.root + 1e-14);
    CHECK(s.hi() >= c.root - 1e-14);
    CHECK(s.width() < 1e-10);
  }
}

TEST_CASE("nowhere dense windows for scaled powers") {
  Alphabet a = A("scaledpowers:50,100");
  CHECK(nowhere_dense_window(a, 0.12894020129093511 + 1e-6, 0.1604));
  CHECK_FALSE(nowhere_dense_window(a, 0.1289 - 1e-4, 0.1604));
  auto s2 = nowhere_dense_start(a, 0.1604);
  REQUIRE(s2);
  CHECK(*s2 == doctest::Approx(0.1289402013).epsilon(1e-6));
  CHECK(*s2 >= 0.1289402012);
  CHECK_FALSE(nowhere_dense_window(A("powers:2"), 0.05, 0.1));
}

TEST_CASE("lacunary window is recomputed") {
  Alphabet a = A("lacunary:3");
  auto t0 = nowhere_dense_start(a, 0.1556);
  REQUIRE(t0);
  // the k = 1 comparison vanishes at 0.14191258825...
  CHECK(*t0 >= 0.1419125882);
  CHECK(*t0 <= 0.1419126882);
  CHECK(nowhere_dense_window(a, *t0, 0.1556));
  CHECK(nowhere_dense_check(a, *t0, 0.1556).pieces >= 1);
}

TEST_CASE("containment and nowhere density never both hold") {
  for (const char* d : {"powers:2", "powers:3", "scaledpowers:50,100", "lacunary:3"}) {
    CAPTURE(d);
    Alphabet a = A(d);
    for (double t = 0.02; t < 0.6; t += 0.02) {
      if (!nowhere_dense_window(a, t, t + 1e-3)) continue;
      for (std::size_t k = 1; k <= 5; ++k) CHECK_FALSE(check_sum_condition_deriv(a, RInterval(t), k));
    }
  }
}

TEST_CASE("gaussian tail") {
  const double alpha[] = {0.1, 0.5, 1, 4, 10};
  const double exact[] = {1.8348522955633725, 0.39768974542335145, 0.13940279264033099, 0.0020727673451681668,
                          2.1703132536943302e-06};
  for (int i = 0; i < 5; ++i) {
    CAPTURE(alpha[i]);
    RInterval g = gaussian_tail(RInterval(alpha[i]));
    CHECK(g.lo() <= exact[i] * (1 + 1e-15));
    CHECK(g.hi() >= exact[i] * (1 - 1e-15));
    CHECK(g.width() <= 1e-6 * exact[i]);
  }
}

TEST_CASE("lacunary derivative bound is negative") {
  // 2(ln(bK)(bK)^{-2t0} - ln b int_1^inf x^2 b^{-2hx^2} dx) = -2.42940 at t0 = 0.14191259, h = 0.15565552
  RInterval e = lacunary_derivative_bound(3, 0.14191259, 0.15565552);
  CHECK(e.hi() >= -2.4294032345747937);
  CHECK(e.hi() < -2.4);
  CHECK(certainly_negative(e));
}

TEST_CASE("spectrum reports") {
  SUBCASE("even has full spectrum") {
    SpectrumReport r = full_spectrum_certify(A("even"));
    CHECK(r.full_spectrum);
    CHECK(covers(r, 0.0, r.dim.h_lo));
    CHECK(verify_report(A("even"), r));
  }
  SUBCASE("squares bootstraps through an initial segment") {
    SpectrumReport r = full_spectrum_certify(A("squares"));
    CHECK(r.full_spectrum);
    CHECK(verify_report(A("squares"), r));
    bool segment = false;
    for (const auto& iv : r.full_intervals) segment = segment || iv.segment.has_value();
    CHECK(segment);
    CHECK(r.external_facts_used.empty());
  }
  SUBCASE("primes need the external fact") {
    SpectrumReport r = full_spectrum_certify(A("primes"));
    CHECK(r.full_spectrum);
    CHECK_FALSE(r.external_facts_used.empty());
    SpectrumConfig off;
    off.use_external_facts = false;
    off.dim = r.dim;
    SpectrumReport r2 = full_spectrum_certify(A("primes"), off);
    CHECK_FALSE(r2.full_spectrum);
    CHECK(r2.external_facts_used.empty());
  }
  SUBCASE("powers of two") {
    SpectrumReport r = full_spectrum_certify(A("powers:2"));
    CHECK(covers(r, 0.0, 0.3102));
    CHECK_FALSE(r.full_spectrum);
    CHECK(verify_report(A("powers:2"), r));
    for (const auto& iv : r.full_intervals) CHECK(iv.hi <= r.dim.h_hi);
  }
  SUBCASE("scaled powers") {
    SpectrumReport r = full_spectrum_certify(A("scaledpowers:50,100"));
    CHECK(covers(r, 0.0, 0.0585));
    REQUIRE_FALSE(r.nowhere_dense_windows.empty());
    CHECK(r.nowhere_dense_windows.front().lo <= 0.1290);
    CHECK(r.nowhere_dense_windows.front().hi <= r.dim.h_hi);
    CHECK(verify_report(A("scaledpowers:50,100"), r));
  }
}
