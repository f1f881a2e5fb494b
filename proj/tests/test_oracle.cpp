#include <doctest.h>

#include "cfdim/error.hpp"
#include "cfdim/oracle.hpp"
#include "properties.hpp"

using namespace cfdim;
using namespace cfdim::oracle;

TEST_CASE("continuants") {
  CHECK(continuant({1}) == 1);
  CHECK(continuant({1, 1, 1}) == 3);
  CHECK(continuant({2, 3}) == 7);
  CHECK(continuant({}) == 1);
  // F_41 = 165580141
  CHECK(continuant(Word(40, 1)) == BigInt(165580141));
}

TEST_CASE("word norms") {
  CHECK(word_norm({1}) == Rational(1));
  CHECK(word_norm({1, 1}) == Rational(1, 4));
  CHECK(word_norm({2, 3}) == Rational(1, 49));
}

TEST_CASE("partition sums") {
  CHECK(static_cast<double>(partition_sum({1}, 2, 1)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(static_cast<double>(partition_sum({1, 2}, 1, 1)) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(static_cast<double>(partition_sum({1, 2}, 2, 0)) == 4.0);
  CHECK_THROWS_AS(partition_sum({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 8, 1), GuardExceeded);
}

TEST_CASE("dimension oracle") {
  DimensionBracket one = dimension_oracle({1}, 1e-9);
  CHECK(one.lo == 0.0);
  CHECK(one.hi == 1e-9);

  DimensionBracket b12 = dimension_oracle({1, 2});
  CHECK(b12.lo <= 0.5312805063);
  CHECK(b12.hi >= 0.5312805062);
  CHECK(b12.hi - b12.lo < 1e-9);
  CHECK(b12.outer_lo <= b12.lo);
  CHECK(b12.hi <= b12.outer_hi);

  DimensionBracket b14 = dimension_oracle({1, 4});
  CHECK(b14.lo <= 0.411184);
  CHECK(b14.hi >= 0.411181);
  CHECK(b14.estimate == doctest::Approx(0.4111827248).epsilon(1e-9));

  CHECK_THROWS_AS(dimension_oracle({}), ParameterError);
  CHECK_THROWS_AS(dimension_oracle({1, 2}, 1e-12, 20), GuardExceeded);
}

TEST_CASE("chain rule") {
  auto r = props::chain_rule(500, 5);
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("submultiplicativity") {
  auto r = props::submultiplicativity(300, 6);
  INFO(r.failure);
  CHECK(r.ok);
}

TEST_CASE("oracle dimension decreases under increasing bijections") {
  const std::vector<std::pair<Word, Word>> pairs = {{{1, 2}, {1, 3}}, {{1, 2}, {2, 3}}, {{2, 3, 4}, {2, 4, 7}}, {{1, 4}, {2, 5}}};
  for (const auto& [e, f] : pairs) {
    auto de = dimension_oracle(e, 1e-12, 300000), df = dimension_oracle(f, 1e-12, 300000);
    CHECK(df.hi <= de.hi + 2e-12);
  }
}

TEST_CASE("composition") {
  // phi_{1,1}(0) = 1/(1 + 1/(1 + 0)) = 1/2
  CHECK(compose({1, 1}, Real(0)) == Real(1) / 2);
  CHECK(compose({2, 3}, Real(0)) == Real(3) / 7);
}
